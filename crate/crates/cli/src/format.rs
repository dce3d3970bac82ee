//! Deterministic number and CSV rendering.
//!
//! Numbers carry 12 significant digits, plain decimal, '.' separator,
//! trailing zeros trimmed. Identical inputs produce byte-identical output.

use std::io::{self, Write};

const SIG_DIGITS: usize = 12;

/// Renders `x` with 12 significant digits: plain decimal notation in the
/// exponent range [-4, 15], scientific outside it.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    // Route through exponential form to pin the significant digits, then
    // shift the point back to plain decimal.
    let s = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = s.split_once('e').expect("exponential form");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-4..=15).contains(&exp) {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        return format!("{m}e{exp}");
    }
    let neg = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    // value = 0.digits * 10^{exp+1}
    let point = exp + 1;
    if point <= 0 {
        out.push_str("0.");
        for _ in 0..-point {
            out.push('0');
        }
        out.push_str(digits.trim_end_matches('0'));
        if out.ends_with('.') {
            out.pop();
        }
    } else if (point as usize) >= digits.len() {
        out.push_str(&digits);
        for _ in 0..(point as usize - digits.len()) {
            out.push('0');
        }
    } else {
        out.push_str(&digits[..point as usize]);
        let frac = digits[point as usize..].trim_end_matches('0');
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
    }
    if out == "-0" {
        out = "0".into();
    }
    out
}

/// `re+imi` / `re-imi` with both parts rendered by [`fmt_f64`].
pub fn fmt_complex(z: num_complex::Complex64) -> String {
    let re = fmt_f64(z.re);
    let im = fmt_f64(z.im.abs());
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{re}{sign}{im}i")
}

/// A rectangular table of decimal strings.
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

#[derive(Debug)]
pub struct ShapeError;

impl std::fmt::Display for ShapeError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("non-rectangular csv row")
    }
}

impl std::error::Error for ShapeError {}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        CsvTable { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push_row(&mut self, row: Vec<String>) -> Result<(), ShapeError> {
        if row.len() != self.header.len() {
            return Err(ShapeError);
        }
        self.rows.push(row);
        Ok(())
    }
}

/// Header line then data rows, comma separated, '\n' line endings.
pub fn write_csv(t: &CsvTable, sink: &mut dyn Write) -> io::Result<()> {
    writeln!(sink, "{}", t.header.join(","))?;
    for row in &t.rows {
        writeln!(sink, "{}", row.join(","))?;
    }
    Ok(())
}
