//! Experiment configuration: TOML schema, complex-number parsing, and
//! resolution into core types.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use loopbraid::reps::{BChoice, ProjectorParams, RepresentationParams};
use loopbraid::rmatrix::RMatrixSpec;
use loopbraid::spectral::SpectralPolynomial;
use loopbraid::DenseOperator;

/// Error at configuration level; always maps to exit code 3.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "configuration error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn cfg_err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

/// Parse "re" or "re+im i" forms: "1.5", "-2", "0.5+0.3i", "1e-3-2i", "i",
/// "-i", "0.4i".
pub fn parse_complex(input: &str) -> Result<C64, ConfigError> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return cfg_err("empty number");
    }
    let parse_real = |t: &str| -> Result<f64, ConfigError> {
        t.parse::<f64>()
            .map_err(|_| ConfigError(format!("cannot parse '{t}' as a number in '{input}'")))
    };
    if !s.ends_with('i') && !s.ends_with('I') {
        return Ok(C64::new(parse_real(&s)?, 0.0));
    }
    let body = &s[..s.len() - 1];
    // split at the sign separating the real and imaginary parts, ignoring a
    // leading sign and exponent signs
    let mut split = None;
    for (idx, ch) in body.char_indices().skip(1) {
        if (ch == '+' || ch == '-') && !matches!(body.as_bytes()[idx - 1], b'e' | b'E') {
            split = Some(idx);
        }
    }
    let (re_str, im_str) = match split {
        Some(idx) => (&body[..idx], &body[idx..]),
        None => ("", body),
    };
    let im = match im_str {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => parse_real(t)?,
    };
    let re = if re_str.is_empty() {
        0.0
    } else {
        parse_real(re_str)?
    };
    Ok(C64::new(re, im))
}

/// Render a complex value in the same "re+imi" form the parser accepts.
pub fn format_complex(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Names of the runnable checks.
pub const CHECK_NAMES: [&str; 9] = [
    "relations",
    "ybe",
    "rtt",
    "abcd",
    "transfer-commute",
    "charges",
    "hamiltonian",
    "spectrum",
    "diagnostic",
];

/// Raw TOML schema. Numbers that may be complex are written as strings.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub seed: u64,
    pub spec: RawSpec,
    pub geometry: RawGeometry,
    pub checks: RawChecks,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub sweep: RawSweep,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpec {
    pub ansatz: String,
    #[serde(default)]
    pub c_const: Option<String>,
    #[serde(default)]
    pub alpha: Option<String>,
    #[serde(default)]
    pub b_choice: Option<String>,
    #[serde(default)]
    pub a_poly: Option<Vec<String>>,
    #[serde(default)]
    pub b_poly: Option<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawGeometry {
    pub n_sites: usize,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawChecks {
    pub names: Vec<String>,
    #[serde(default)]
    pub u0: Option<String>,
    #[serde(default)]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Deserialize, Serialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawSweep {
    #[serde(default)]
    pub radius: Option<f64>,
}

/// Fully resolved experiment description.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub raw: RawConfig,
    pub spec: RMatrixSpec,
    pub n_sites: usize,
    pub checks: Vec<String>,
    pub u0: C64,
    pub samples: usize,
    pub radius: f64,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
}

impl Experiment {
    pub fn tolerance(&self, check: &str, default: f64) -> f64 {
        self.tolerances.get(check).copied().unwrap_or(default)
    }
}

pub fn parse_b_choice(text: &str) -> Result<BChoice, ConfigError> {
    if text == "zz-half" {
        return Ok(BChoice::ZzHalf);
    }
    if let Some(rest) = text.strip_prefix("product:") {
        let parts: Vec<&str> = rest.split(',').collect();
        if parts.len() != 3 {
            return cfg_err(format!(
                "b_choice 'product:' needs three components l,m,n; got '{rest}'"
            ));
        }
        let l = parse_complex(parts[0])?;
        let m = parse_complex(parts[1])?;
        let n = parse_complex(parts[2])?;
        let params = ProjectorParams::new(l, m, n)
            .map_err(|e| ConfigError(format!("b_choice product projector: {e}")))?;
        return Ok(BChoice::ProductProjector(params));
    }
    if let Some(path) = text.strip_prefix("custom:") {
        let content = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read custom B file '{path}': {e}")))?;
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != 16 {
            return cfg_err(format!(
                "custom B file '{path}' must hold 16 whitespace-separated entries (row-major), found {}",
                tokens.len()
            ));
        }
        let mut entries = Vec::with_capacity(16);
        for t in tokens {
            entries.push(parse_complex(t)?);
        }
        let op = DenseOperator::from_row_slice(4, &entries)
            .map_err(|e| ConfigError(format!("custom B file '{path}': {e}")))?;
        return Ok(BChoice::Custom(op));
    }
    cfg_err(format!(
        "unknown b_choice '{text}' (expected zz-half, product:l,m,n, or custom:file)"
    ))
}

fn parse_poly(
    coeffs: &Option<Vec<String>>,
    field: &str,
) -> Result<Option<SpectralPolynomial>, ConfigError> {
    match coeffs {
        None => Ok(None),
        Some(list) => {
            let mut parsed = Vec::with_capacity(list.len());
            for (idx, text) in list.iter().enumerate() {
                parsed.push(
                    parse_complex(text)
                        .map_err(|e| ConfigError(format!("{field}[{idx}]: {}", e.0)))?,
                );
            }
            Ok(Some(SpectralPolynomial::new(parsed)))
        }
    }
}

pub fn resolve_spec(raw: &RawSpec) -> Result<RMatrixSpec, ConfigError> {
    let a_poly = parse_poly(&raw.a_poly, "a_poly")?;
    let b_poly = parse_poly(&raw.b_poly, "b_poly")?;
    let alpha = match &raw.alpha {
        Some(t) => Some(parse_complex(t).map_err(|e| ConfigError(format!("alpha: {}", e.0)))?),
        None => None,
    };
    let b_choice = match &raw.b_choice {
        Some(t) => Some(parse_b_choice(t)?),
        None => None,
    };
    let need_rep = |what: &str| -> Result<RepresentationParams, ConfigError> {
        let alpha = alpha.ok_or_else(|| ConfigError(format!("{what} requires spec.alpha")))?;
        let choice = b_choice
            .clone()
            .ok_or_else(|| ConfigError(format!("{what} requires spec.b_choice")))?;
        Ok(RepresentationParams::new(alpha, choice))
    };
    match raw.ansatz.as_str() {
        "rational" => {
            let c_text = raw
                .c_const
                .as_ref()
                .ok_or_else(|| ConfigError("rational ansatz requires spec.c_const".into()))?;
            let c = parse_complex(c_text).map_err(|e| ConfigError(format!("c_const: {}", e.0)))?;
            if c.norm() == 0.0 {
                return cfg_err("c_const must be nonzero");
            }
            Ok(RMatrixSpec::Rational { c })
        }
        "a1" => {
            let a_fn =
                a_poly.ok_or_else(|| ConfigError("a1 ansatz requires spec.a_poly".into()))?;
            Ok(RMatrixSpec::A1 {
                params: need_rep("a1 ansatz")?,
                a_fn,
            })
        }
        "a2" => {
            let a_fn =
                a_poly.ok_or_else(|| ConfigError("a2 ansatz requires spec.a_poly".into()))?;
            Ok(RMatrixSpec::A2 {
                params: need_rep("a2 ansatz")?,
                a_fn,
            })
        }
        "a3" => {
            let params = need_rep("a3 ansatz")?;
            let alpha = params.alpha;
            let a_fn = match a_poly {
                Some(p) => p,
                // model defaults: a(u) = alpha u, b(u) = -2 alpha u
                None => SpectralPolynomial::linear(alpha),
            };
            let b_fn = match b_poly {
                Some(p) => p,
                None => SpectralPolynomial::linear(C64::new(-2.0, 0.0) * alpha),
            };
            Ok(RMatrixSpec::A3 { params, a_fn, b_fn })
        }
        other => cfg_err(format!(
            "unknown ansatz '{other}' (expected rational, a1, a2, or a3)"
        )),
    }
}

pub fn resolve(raw: RawConfig) -> Result<Experiment, ConfigError> {
    let spec = resolve_spec(&raw.spec)?;
    if raw.geometry.n_sites < 2 {
        return cfg_err("geometry.n_sites must be at least 2");
    }
    if raw.geometry.n_sites > 13 {
        return cfg_err("geometry.n_sites above 13 exceeds the dense-storage cap");
    }
    for name in &raw.checks.names {
        if !CHECK_NAMES.contains(&name.as_str()) {
            return cfg_err(format!(
                "unknown check '{name}' (expected one of {})",
                CHECK_NAMES.join(", ")
            ));
        }
    }
    for key in raw.tolerances.keys() {
        if !CHECK_NAMES.contains(&key.as_str()) {
            return cfg_err(format!("tolerance override for unknown check '{key}'"));
        }
    }
    // the braid generator must stay invertible for the presentation checks
    if let RMatrixSpec::A1 { params, .. }
    | RMatrixSpec::A2 { params, .. }
    | RMatrixSpec::A3 { params, .. } = &spec
    {
        let inverse_requiring = raw
            .checks
            .names
            .iter()
            .any(|n| n == "relations" || n == "diagnostic");
        if inverse_requiring && (params.alpha + C64::new(1.0, 0.0)).norm() < 1e-14 {
            return cfg_err(
                "alpha = -1 violates the inverse precondition: \
                 sigma^{-1} = s - alpha/(1+alpha) B requires alpha != -1",
            );
        }
    }
    let u0 = match &raw.checks.u0 {
        Some(t) => parse_complex(t).map_err(|e| ConfigError(format!("checks.u0: {}", e.0)))?,
        None => match &spec {
            // the midpoint keeps the isotropic closed form exact
            RMatrixSpec::Rational { c } => *c * C64::new(0.5, 0.0),
            _ => C64::new(0.0, 0.0),
        },
    };
    let samples = raw.checks.samples.unwrap_or(5);
    if samples == 0 {
        return cfg_err("checks.samples must be positive");
    }
    let radius = raw.sweep.radius.unwrap_or(1.0);
    if !(radius > 0.0 && radius.is_finite()) {
        return cfg_err("sweep.radius must be positive and finite");
    }
    Ok(Experiment {
        seed: raw.seed,
        spec,
        n_sites: raw.geometry.n_sites,
        checks: raw.checks.names.clone(),
        u0,
        samples,
        radius,
        tolerances: raw.tolerances.clone(),
        raw,
    })
}

pub fn load(path: &Path) -> Result<Experiment, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read '{}': {e}", path.display())))?;
    let raw: RawConfig = toml::from_str(&text)
        .map_err(|e| ConfigError(format!("in '{}': {e}", path.display())))?;
    resolve(raw)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("1.5").unwrap(), C64::new(1.5, 0.0));
        assert_eq!(parse_complex("-2").unwrap(), C64::new(-2.0, 0.0));
        assert_eq!(parse_complex("0.5+0.3i").unwrap(), C64::new(0.5, 0.3));
        assert_eq!(parse_complex("0.5-0.3i").unwrap(), C64::new(0.5, -0.3));
        assert_eq!(parse_complex("i").unwrap(), C64::new(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), C64::new(0.0, -1.0));
        assert_eq!(parse_complex("0.4i").unwrap(), C64::new(0.0, 0.4));
        assert_eq!(parse_complex("1e-3+2e-2i").unwrap(), C64::new(1e-3, 2e-2));
        assert_eq!(parse_complex(" 0.5 + 0.3 i ").unwrap(), C64::new(0.5, 0.3));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
    }

    #[test]
    fn complex_round_trip() {
        for z in [
            C64::new(1.0, 0.0),
            C64::new(-0.25, 0.75),
            C64::new(0.0, -2.0),
            C64::new(1e-3, 2e-2),
        ] {
            assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
    }

    #[test]
    fn b_choice_forms() {
        assert!(matches!(parse_b_choice("zz-half"), Ok(BChoice::ZzHalf)));
        assert!(matches!(
            parse_b_choice("product:0,0,0.5"),
            Ok(BChoice::ProductProjector(_))
        ));
        assert!(parse_b_choice("product:0,0,0").is_err());
        assert!(parse_b_choice("nonsense").is_err());
    }

    #[test]
    fn alpha_minus_one_is_rejected_for_inverse_requiring_checks() {
        let raw: RawConfig = toml::from_str(
            r#"
            seed = 1
            [spec]
            ansatz = "a2"
            alpha = "-1"
            b_choice = "zz-half"
            a_poly = ["0", "1"]
            [geometry]
            n_sites = 4
            [checks]
            names = ["relations"]
            "#,
        )
        .unwrap();
        let err = resolve(raw).unwrap_err();
        assert!(err.0.contains("sigma^{-1}"), "{}", err.0);
    }

    #[test]
    fn rational_defaults_to_the_midpoint() {
        let raw: RawConfig = toml::from_str(
            r#"
            seed = 7
            [spec]
            ansatz = "rational"
            c_const = "2"
            [geometry]
            n_sites = 3
            [checks]
            names = ["hamiltonian"]
            "#,
        )
        .unwrap();
        let exp = resolve(raw).unwrap();
        assert_eq!(exp.u0, C64::new(1.0, 0.0));
    }
}
