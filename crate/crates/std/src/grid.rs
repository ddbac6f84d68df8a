//! Flag values that are a single number, a comma list, or `start:stop:step`.

/// Grid points are rounded to this many decimals so that `1.1:2:0.1` prints
/// as `1.3`, not `1.3000000000000003`.
const DECIMALS: f64 = 1e12;

fn tidy(x: f64) -> f64 {
    if x.is_finite() {
        (x * DECIMALS).round() / DECIMALS
    } else {
        x
    }
}

fn number(s: &str, flag: &str) -> Result<f64, String> {
    match s.trim() {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        t => t.parse::<f64>().map_err(|_| format!("{flag}: `{t}` is not a number")),
    }
}

/// Parses `A`, `A,B,...` or `start:stop:step` (inclusive of `stop`).
pub fn parse_f64_grid(s: &str, flag: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let values = match parts.as_slice() {
        [start, stop, step] => {
            let (a, b, h) = (number(start, flag)?, number(stop, flag)?, number(step, flag)?);
            if ![a, b, h].iter().all(|x| x.is_finite()) || h <= 0.0 || b < a {
                return Err(format!("{flag}: range `{s}` needs finite start <= stop and step > 0"));
            }
            let count = ((b - a) / h + 1e-9).floor() as usize + 1;
            if count > 1_000_000 {
                return Err(format!("{flag}: range `{s}` has {count} points"));
            }
            (0..count).map(|i| tidy(a + i as f64 * h)).collect()
        }
        [_] => s.split(',').map(|p| number(p, flag)).collect::<Result<Vec<_>, _>>()?,
        _ => return Err(format!("{flag}: expected A, A,B,... or start:stop:step, got `{s}`")),
    };
    if values.is_empty() || values.iter().any(|x| x.is_nan()) {
        return Err(format!("{flag}: empty or invalid grid `{s}`"));
    }
    Ok(values)
}

/// Integer version for copy counts; every value must be positive.
pub fn parse_u64_grid(s: &str, flag: &str) -> Result<Vec<u64>, String> {
    let values = parse_f64_grid(s, flag)?;
    values
        .iter()
        .map(|&x| {
            if x >= 1.0 && x.fract() == 0.0 && x <= u32::MAX as f64 {
                Ok(x as u64)
            } else {
                Err(format!("{flag}: `{x}` is not a positive integer"))
            }
        })
        .collect()
}
