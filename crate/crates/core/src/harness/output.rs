use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Writes a CSV with a header row; every row must match the header width.
pub fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<PathBuf> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        if row.len() != header.len() {
            return Err(Error::InvalidParameter(format!(
                "row of {} values for {} columns",
                row.len(),
                header.len()
            )));
        }
        w.write_record(row.iter().map(|v| format!("{v:e}"))).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(path.to_path_buf())
}

/// Reads a two-column `(t, value)` CSV with a header row.
pub fn read_trace(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let (mut t, mut v) = (Vec::new(), Vec::new());
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        if rec.len() < 2 {
            return Err(Error::Config(format!("{}: row {} has fewer than 2 columns", path.display(), line + 2)));
        }
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Config(format!("{}: row {}: {e}", path.display(), line + 2)))
        };
        t.push(parse(&rec[0])?);
        v.push(parse(&rec[1])?);
    }
    Ok((t, v))
}

pub fn write_text(path: &Path, text: &str) -> Result<PathBuf> {
    fs::write(path, text)?;
    Ok(path.to_path_buf())
}

fn csv_err(e: csv::Error) -> Error {
    Error::Config(format!("csv: {e}"))
}

pub fn fig1_plot_script(files: &[String]) -> String {
    let list = files.iter().map(|f| format!("{f:?}")).collect::<Vec<_>>().join(", ");
    format!(
        r#"import csv
import matplotlib.pyplot as plt

files = [{list}]
fig, axes = plt.subplots(1, len(files), figsize=(5 * len(files), 4))
if len(files) == 1:
    axes = [axes]
for ax, name in zip(axes, files):
    rows = list(csv.DictReader(open(name)))
    t = [float(r["t"]) for r in rows]
    ax.plot(t, [float(r["elastic"]) for r in rows], "r", label="elastic")
    ax.plot(t, [float(r["viscous"]) for r in rows], "b", label="viscous")
    ax.set_xlim(0.0, 0.06)
    ax.set_xlabel("t [s]")
    ax.set_title(name)
    ax.legend()
fig.tight_layout()
fig.savefig("fig1.png", dpi=150)
"#
    )
}

pub fn fig2_plot_script(files: &[String]) -> String {
    let list = files.iter().map(|f| format!("{f:?}")).collect::<Vec<_>>().join(", ");
    format!(
        r#"import csv
import matplotlib.pyplot as plt
import numpy as np

files = [{list}]
fig, axes = plt.subplots(1, len(files), figsize=(5 * len(files), 4.5))
for ax, name in zip(axes, files):
    rows = list(csv.DictReader(open(name)))
    x = np.array([float(r["x"]) for r in rows])
    y = np.array([float(r["y"]) for r in rows])
    v = np.array([float(r["value"]) for r in rows])
    n = int(round(np.sqrt(len(v))))
    im = ax.imshow(v.reshape(n, n).T, origin="lower",
                   extent=[x.min(), x.max(), y.min(), y.max()], cmap="jet")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.set_title(name)
    fig.colorbar(im, ax=ax)
fig.tight_layout()
fig.savefig("fig2.png", dpi=150)
"#
    )
}

pub fn fig3_plot_script() -> String {
    r#"import csv
import matplotlib.pyplot as plt

rows = list(csv.DictReader(open("fig3_curves.csv")))
t = [float(r["t"]) for r in rows]
err = list(csv.DictReader(open("fig3_errors.csv")))
fig, (a, b) = plt.subplots(1, 2, figsize=(10, 4))
a.plot(t, [float(r["phi"]) for r in rows], label="phi")
a.plot(t, [float(r["l_tilde"]) for r in rows], label="L~ phi")
a.plot(t, [float(r["approximation"]) for r in rows], "--", label="phi + eps/2 t phi''")
a.set_xlabel("t [s]")
a.legend()
b.loglog([float(r["eps"]) for r in err], [float(r["error"]) for r in err], "o-")
b.set_xlabel("nu_s / c_s^2 [s]")
b.set_ylabel("sup error")
fig.tight_layout()
fig.savefig("fig3.png", dpi=150)
"#
    .to_string()
}

pub fn image_plot_script(file: &str) -> String {
    format!(
        r#"import csv
import matplotlib.pyplot as plt
import numpy as np

rows = list(csv.DictReader(open({file:?})))
x = np.array([float(r["x"]) for r in rows])
y = np.array([float(r["y"]) for r in rows])
s = np.array([float(r["score"]) for r in rows])
plt.tricontourf(x, y, s, 50)
plt.colorbar()
plt.xlabel("x [m]")
plt.ylabel("y [m]")
plt.savefig("image.png", dpi=150)
"#
    )
}
