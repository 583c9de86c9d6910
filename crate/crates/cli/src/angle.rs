//! Angle literals: plain radians (`1.5708`) or multiples of π (`pi`, `-pi`, `0.5pi`,
//! `3pi/4`, `pi/2`).

use std::f64::consts::PI;

pub fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let bad = || format!("bad angle `{s}` (expected radians or <k>pi[/<d>])");
    let Some(pos) = t.find("pi") else {
        return t.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(bad);
    };
    let (head, tail) = (&t[..pos], &t[pos + 2..]);
    let k = match head.trim() {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.strip_suffix('*').unwrap_or(h).parse::<f64>().map_err(|_| bad())?,
    };
    let d = match tail.trim() {
        "" => 1.0,
        rest => {
            let d: f64 = rest
                .strip_prefix('/')
                .ok_or_else(bad)?
                .trim()
                .parse()
                .map_err(|_| bad())?;
            if d == 0.0 {
                return Err(bad());
            }
            d
        }
    };
    let v = k * PI / d;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}
