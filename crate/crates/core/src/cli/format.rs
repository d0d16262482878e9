//! Fixed-format numbers and the CSV / aligned-table writers.

/// Scientific notation with `digits` decimals and a signed, at least
/// two-digit exponent: `7.01E-03`.
pub fn sci(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.digits$E}");
    let (mantissa, exp) = s.split_once('E').expect("E format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}E{sign}{:02}", exp.abs())
}

/// Fixed point with six decimals, as used for orders and grading exponents.
pub fn fixed6(x: f64) -> String {
    format!("{x:.6}")
}

/// A header plus rows of preformatted cells, and trailing notes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub notes: Vec<String>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Comma-separated rows under a one-line header; notes follow as `#`
    /// lines.
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        for note in &self.notes {
            out.push_str("# ");
            out.push_str(note);
            out.push('\n');
        }
        out
    }

    /// Right-aligned columns for reading in a terminal; blank cells show `-`.
    pub fn to_aligned(&self) -> String {
        let cell = |s: &str| if s.is_empty() { "-".to_string() } else { s.to_string() };
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
        for row in &self.rows {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell(c).chars().count());
            }
        }
        let line = |cells: Vec<String>| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
        };
        let mut out = line(self.header.iter().map(|h| h.to_string()).collect());
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row.iter().map(|c| cell(c)).collect()));
            out.push('\n');
        }
        for note in &self.notes {
            out.push_str("note: ");
            out.push_str(note);
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scientific_matches_table_style() {
        assert_eq!(sci(7.01e-3, 2), "7.01E-03");
        assert_eq!(sci(0.0070084419955997535, 2), "7.01E-03");
        assert_eq!(sci(0.1429, 2), "1.43E-01");
        assert_eq!(sci(12345.0, 3), "1.234E+04");
        assert_eq!(sci(0.0, 2), "0.00E+00");
        assert_eq!(sci(-2.5e-120, 1), "-2.5E-120");
        assert_eq!(sci(f64::NAN, 2), "NaN");
    }

    #[test]
    fn fixed_six() {
        assert_eq!(fixed6(1.2668094), "1.266809");
        assert_eq!(fixed6(13.0 / 7.0), "1.857143");
    }

    #[test]
    fn csv_and_table_layout() {
        let mut t = Table::new(vec!["a", "bb"]);
        t.rows.push(vec!["1".into(), "".into()]);
        t.rows.push(vec!["100".into(), "2".into()]);
        t.notes.push("capped".into());
        assert_eq!(t.to_csv(), "a,bb\n1,\n100,2\n# capped\n");
        assert_eq!(t.to_aligned(), "  a  bb\n  1   -\n100   2\nnote: capped\n");
    }
}
