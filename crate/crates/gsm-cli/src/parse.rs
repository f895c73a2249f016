//! Parsers for the small CLI spec strings: comma float lists, function
//! specs like `hermite:1,0`, and grid specs like `x0=-2:2:101,r=0:2:101`.

use gsm_core::function_algebra::MultiIndex;

/// Comma-separated float list, `.` decimal.
pub fn parse_float_list(s: &str) -> Result<Vec<f64>, String> {
    if s.trim().is_empty() {
        return Err("empty coordinate list".to_string());
    }
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| format!("bad number {part:?} in coordinate list"))
        })
        .collect()
}

fn parse_multi_index(s: &str, nvars: usize) -> Result<MultiIndex, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != nvars {
        return Err(format!(
            "multi-index {s:?} has {} components, expected p + 1 = {nvars}"
        , parts.len()));
    }
    let mut k = Vec::with_capacity(nvars);
    for part in parts {
        k.push(
            part.trim()
                .parse::<u32>()
                .map_err(|_| format!("bad multi-index component {part:?}"))?,
        );
    }
    Ok(MultiIndex::new(k))
}

/// Function specs accepted by `ck-eval` and `transform-eval`.
#[derive(Debug, Clone, PartialEq)]
pub enum InputSpec {
    /// Hermite function `phi_k` (rate 1/2 Gaussian).
    Hermite(MultiIndex),
    /// `psi_k = CK[x^k exp(-|x|^2/4)]`.
    Psi(MultiIndex),
    /// `x^k exp(-|x|^2/4)`.
    MonomialGaussian(MultiIndex),
    /// Plain monomial `x^k`.
    Monomial(MultiIndex),
}

pub fn parse_input_spec(s: &str, nvars: usize) -> Result<InputSpec, String> {
    let (head, rest) = s
        .split_once(':')
        .ok_or_else(|| format!("input spec {s:?} needs the form kind:k0[,k1,..]"))?;
    let k = parse_multi_index(rest, nvars)?;
    match head {
        "hermite" => Ok(InputSpec::Hermite(k)),
        "psi" => Ok(InputSpec::Psi(k)),
        "monomial-gaussian" => Ok(InputSpec::MonomialGaussian(k)),
        "monomial" => Ok(InputSpec::Monomial(k)),
        other => Err(format!(
            "unknown input kind {other:?} (expected hermite, psi, monomial-gaussian or monomial)"
        )),
    }
}

/// Field specs accepted by `plot-data`.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldSpec {
    Psi(MultiIndex),
    Kernel,
}

pub fn parse_field_spec(s: &str, nvars: usize) -> Result<FieldSpec, String> {
    if s == "kernel" {
        return Ok(FieldSpec::Kernel);
    }
    match parse_input_spec(s, nvars)? {
        InputSpec::Psi(k) => Ok(FieldSpec::Psi(k)),
        _ => Err(format!("field spec {s:?} must be `kernel` or `psi:k`")),
    }
}

/// One grid dimension: a coordinate name, inclusive bounds and a count.
#[derive(Debug, Clone, PartialEq)]
pub struct GridAxis {
    pub var: GridVar,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridVar {
    /// Coordinate `x_i`, `0 <= i <= p`.
    X(usize),
    /// Radial slice coordinate `r = |y|` along a fixed direction.
    R,
}

impl GridAxis {
    pub fn value(&self, i: usize) -> f64 {
        if self.count <= 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * i as f64 / (self.count - 1) as f64
        }
    }
}

/// Grid spec `var=min:max:count[,var=min:max:count...]` with vars
/// `x0..xp` and `r`.
pub fn parse_grid_spec(s: &str, p: usize) -> Result<Vec<GridAxis>, String> {
    let mut axes = Vec::new();
    for part in s.split(',') {
        let (name, range) = part
            .split_once('=')
            .ok_or_else(|| format!("grid axis {part:?} needs the form var=min:max:count"))?;
        let var = if name == "r" {
            GridVar::R
        } else if let Some(idx) = name.strip_prefix('x') {
            let i: usize = idx
                .parse()
                .map_err(|_| format!("bad grid variable {name:?}"))?;
            if i > p {
                return Err(format!("grid variable {name:?} exceeds p = {p}"));
            }
            GridVar::X(i)
        } else {
            return Err(format!("unknown grid variable {name:?} (use x0..x{p} or r)"));
        };
        let fields: Vec<&str> = range.split(':').collect();
        if fields.len() != 3 {
            return Err(format!("grid range {range:?} needs min:max:count"));
        }
        let min: f64 = fields[0]
            .parse()
            .map_err(|_| format!("bad grid bound {:?}", fields[0]))?;
        let max: f64 = fields[1]
            .parse()
            .map_err(|_| format!("bad grid bound {:?}", fields[1]))?;
        let count: usize = fields[2]
            .parse()
            .map_err(|_| format!("bad grid count {:?}", fields[2]))?;
        if axes.iter().any(|a: &GridAxis| a.var == var) {
            return Err(format!("grid variable {name:?} listed twice"));
        }
        axes.push(GridAxis { var, min, max, count });
    }
    if axes.is_empty() {
        return Err("empty grid spec".to_string());
    }
    Ok(axes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_lists() {
        assert_eq!(parse_float_list("1.5,-2,0.25").unwrap(), vec![1.5, -2.0, 0.25]);
        assert!(parse_float_list("1.5,,2").is_err());
        assert!(parse_float_list("").is_err());
        assert!(parse_float_list("abc").is_err());
    }

    #[test]
    fn input_specs() {
        assert_eq!(
            parse_input_spec("hermite:2", 1).unwrap(),
            InputSpec::Hermite(MultiIndex::new(vec![2]))
        );
        assert_eq!(
            parse_input_spec("psi:1,0", 2).unwrap(),
            InputSpec::Psi(MultiIndex::new(vec![1, 0]))
        );
        assert!(parse_input_spec("psi:1", 2).is_err());
        assert!(parse_input_spec("psi", 1).is_err());
        assert!(parse_input_spec("banana:1", 1).is_err());
        assert!(parse_input_spec("psi:-1", 1).is_err());
    }

    #[test]
    fn grid_specs() {
        let axes = parse_grid_spec("x0=-2:2:101,r=0:3:11", 0).unwrap();
        assert_eq!(axes.len(), 2);
        assert_eq!(axes[0].var, GridVar::X(0));
        assert_eq!(axes[0].count, 101);
        assert_eq!(axes[0].value(0), -2.0);
        assert_eq!(axes[0].value(100), 2.0);
        assert_eq!(axes[1].var, GridVar::R);
        assert!(parse_grid_spec("x1=0:1:5", 0).is_err());
        assert!(parse_grid_spec("r=0:1", 0).is_err());
        assert!(parse_grid_spec("r=0:1:3,r=0:1:3", 0).is_err());
        assert!(parse_grid_spec("", 0).is_err());
    }
}
