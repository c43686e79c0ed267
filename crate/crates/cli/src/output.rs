use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

/// C-style `%.12e` formatting, locale independent: sign-carrying two-digit
/// exponent, `nan`/`inf` spelled out.
pub fn fmt_e(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{:.12e}", x);
    let (mant, exp) = s.split_once('e').expect("exponent marker");
    let e: i32 = exp.parse().expect("exponent digits");
    format!("{mant}e{}{:02}", if e < 0 { "-" } else { "+" }, e.abs())
}

pub fn write_output(text: &str, out: &Option<PathBuf>) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::fmt_e;

    #[test]
    fn c_style_exponents() {
        assert_eq!(fmt_e(1.0), "1.000000000000e+00");
        assert_eq!(fmt_e(-0.0625), "-6.250000000000e-02");
        assert_eq!(fmt_e(1.234e+120), "1.234000000000e+120");
        assert_eq!(fmt_e(0.0), "0.000000000000e+00");
        assert_eq!(fmt_e(f64::NAN), "nan");
        assert_eq!(fmt_e(f64::INFINITY), "inf");
    }
}
