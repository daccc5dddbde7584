//! CSV and JSON rendering. Floats use the shortest representation that
//! round-trips, so repeated runs are byte-identical.

use fracspec::models::ModelSpec;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Evaluation points `start + k * step`, `k = 0..count`. A single point has
/// `count = 1` and `step = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Axis {
    pub start: f64,
    pub step: f64,
    pub count: usize,
}

impl Axis {
    pub fn single(x: f64) -> Self {
        Self {
            start: x,
            step: 0.0,
            count: 1,
        }
    }

    /// Points measured from the grid centre, so that a grid symmetric about
    /// zero yields exactly opposite points.
    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        let half = 0.5 * self.step;
        let last = self.count as i64 - 1;
        let centre = self.start + last as f64 * half;
        (0..self.count).map(move |k| centre + (2 * k as i64 - last) as f64 * half)
    }
}

/// One tabulated curve in the JSON layout.
#[derive(Debug, Serialize)]
pub struct CurveRecord {
    pub model: Option<ModelSpec>,
    pub quantity: &'static str,
    pub method: String,
    pub grid: Axis,
    pub values: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values_imag: Option<Vec<f64>>,
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("records serialize");
    s.push('\n');
    s
}

/// CSV table with a header row; every cell is a float.
pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            write!(s, "{v:?}").expect("writing to a String");
        }
        s.push('\n');
    }
    s
}

/// Where `--output` points: relative paths live under `out_dir` when given.
pub fn resolve_output(path: &Path, out_dir: Option<&Path>) -> PathBuf {
    match out_dir {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path.to_path_buf(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_axis_has_exactly_opposite_points() {
        let axis = Axis {
            start: -5.0,
            step: 0.05,
            count: 201,
        };
        let p: Vec<f64> = axis.points().collect();
        assert_eq!(p[0], -5.0);
        assert_eq!(p[200], 5.0);
        assert_eq!(p[100], 0.0);
        for k in 0..201 {
            assert_eq!(p[k], -p[200 - k]);
        }
    }

    #[test]
    fn single_point_axis() {
        assert_eq!(Axis::single(0.7).points().collect::<Vec<_>>(), vec![0.7]);
    }

    #[test]
    fn csv_uses_round_trip_floats() {
        let s = csv(&["x", "y"], vec![vec![1.0, 0.1], vec![-2.5, 1e-300]]);
        assert_eq!(s, "x,y\n1.0,0.1\n-2.5,1e-300\n");
    }

    #[test]
    fn relative_outputs_follow_the_output_directory() {
        let dir = Path::new("/tmp/out");
        assert_eq!(
            resolve_output(Path::new("a.csv"), Some(dir)),
            dir.join("a.csv")
        );
        assert_eq!(
            resolve_output(Path::new("/abs/a.csv"), Some(dir)),
            PathBuf::from("/abs/a.csv")
        );
        assert_eq!(
            resolve_output(Path::new("a.csv"), None),
            PathBuf::from("a.csv")
        );
    }
}
