use std::path::Path;

use crate::error::{Error, Result};

/// A labelled `(x, y)` series; the uniform output of every sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurve {
    pub label: String,
    pub x_name: String,
    pub y_name: String,
    pub points: Vec<(f64, f64)>,
    pub metadata: Vec<(String, String)>,
}

impl BoundCurve {
    pub fn new(
        label: impl Into<String>,
        x_name: impl Into<String>,
        y_name: impl Into<String>,
        points: Vec<(f64, f64)>,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyRange);
        }
        if let Some(i) = points.windows(2).position(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::NonIncreasingAbscissa(i + 1));
        }
        Ok(Self {
            label: label.into(),
            x_name: x_name.into(),
            y_name: y_name.into(),
            points,
            metadata: Vec::new(),
        })
    }

    pub fn with_meta(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.metadata.push((key.into(), value.to_string()));
        self
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.0)
    }

    pub fn ys(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.1)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// y at an exact abscissa, if present.
    pub fn y_at(&self, x: f64) -> Option<f64> {
        self.points.iter().find(|p| p.0 == x).map(|p| p.1)
    }

    /// Writes `x, <constant columns>, y` with a header row.
    pub fn write_csv(&self, path: &Path, constants: &[(&str, f64)]) -> Result<()> {
        let mut header = vec![self.x_name.clone()];
        header.extend(constants.iter().map(|c| c.0.to_string()));
        header.push(self.y_name.clone());
        let rows = self.points.iter().map(|&(x, y)| {
            let mut r = vec![format_value(x)];
            r.extend(constants.iter().map(|c| format_value(c.1)));
            r.push(format_value(y));
            r
        });
        write_table(path, &header, rows)
    }
}

/// Plain decimal for ordinary magnitudes, scientific notation for very
/// small or very large ones. Both forms round-trip exactly.
pub fn format_value(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

/// Writes a table as comma-separated values with LF line endings. Cells
/// use their `Display` form.
pub fn write_table<H, I, R, T>(path: &Path, header: &[H], rows: I) -> Result<()>
where
    H: AsRef<str>,
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = T>,
    T: ToString,
{
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)?;
    w.write_record(header.iter().map(|h| h.as_ref()))?;
    for row in rows {
        w.write_record(row.into_iter().map(|v| v.to_string()))?;
    }
    w.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unordered_abscissa() {
        assert!(matches!(
            BoundCurve::new("c", "x", "y", vec![(0.0, 1.0), (0.0, 2.0)]),
            Err(Error::NonIncreasingAbscissa(1))
        ));
        assert!(matches!(BoundCurve::new("c", "x", "y", vec![]), Err(Error::EmptyRange)));
        let c = BoundCurve::new("c", "x", "y", vec![(0.0, 1.0), (f64::INFINITY, 2.0)]).unwrap();
        assert_eq!(c.y_at(f64::INFINITY), Some(2.0));
    }

    #[test]
    fn csv_layout() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.csv");
        let c = BoundCurve::new("c", "x", "y", vec![(0.0, 0.5), (1.5, 2.0)]).unwrap();
        c.write_csv(&path, &[("k", -5.0)]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "x,k,y\n0,-5,0.5\n1.5,-5,2\n");
    }

    #[test]
    fn value_formatting_round_trips() {
        assert_eq!(format_value(0.25), "0.25");
        assert_eq!(format_value(-5.0), "-5");
        assert_eq!(format_value(f64::INFINITY), "inf");
        assert_eq!(format_value(1.5e-26), "1.5e-26");
        for x in [1e-300, 3.3e-5, 0.1, 7.0, 2.5e20] {
            assert_eq!(format_value(x).parse::<f64>().unwrap(), x);
        }
    }
}
