//! Family specifications as JSON documents.
//!
//! ```json
//! { "type": "translation", "alpha": [1.732, 1, 2], "c": [1, -1, -2],
//!   "lambda": -4.0, "l1_0": 1.0, "sign_l1prime": 1, "xi_range": [-0.2, 0.3] }
//!
//! { "type": "one_constant", "case": "b2", "lambda_const": 1.0,
//!   "b": 0.0, "xi0": 0.0, "alpha": [1, 0, 1], "phi_poly": [0, 0, 1],
//!   "domain": { "lo": [0.2, 0, 0.2], "hi": [0.55, 1, 0.55] } }
//!
//! { "type": "dilation", "case": "a", "a_vec": [0, 1, 0], "b_vec": [0, 0, 1],
//!   "lambda_const": 1.0, "phi_constants": [1.0, 0.0],
//!   "domain": { "lo": [0, -2, 1], "hi": [1, -0.5, 2] } }
//! ```
//!
//! `xi_range` is optional for translation families; when omitted, the net is
//! built on the maximal admissible interval found inside (−10, 10).

use serde::Deserialize;

use guichard_core::families::{
    build_dilation_family, build_one_constant_family, build_translation_family,
    build_translation_family_maximal, DilationCase, DilationConstants, OneConstantCase,
    OneConstantFamily, PhiFunction, TranslationConstants,
};
use guichard_core::{Box3, GuichardNet};

#[derive(Debug, Deserialize)]
pub struct BoxSpec {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    Translation {
        alpha: [f64; 3],
        c: [f64; 3],
        lambda: f64,
        l1_0: f64,
        #[serde(default = "default_sign")]
        sign_l1prime: i8,
        #[serde(default)]
        xi_range: Option<(f64, f64)>,
    },
    OneConstant {
        case: String,
        lambda_const: f64,
        #[serde(default)]
        b: f64,
        #[serde(default)]
        xi0: f64,
        alpha: [f64; 3],
        #[serde(default)]
        phi_poly: Option<Vec<f64>>,
        domain: BoxSpec,
    },
    Dilation {
        case: String,
        a_vec: [f64; 3],
        b_vec: [f64; 3],
        lambda_const: f64,
        phi_constants: [f64; 2],
        domain: BoxSpec,
    },
    /// A constant triple on a unit box; mostly for negative testing.
    Constant { l: [f64; 3] },
}

fn default_sign() -> i8 {
    1
}

#[derive(Debug)]
pub enum ConfigError {
    Json(String),
    Core(guichard_core::Error),
    Invalid(String),
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConfigError::Json(m) => write!(f, "config error: {m}"),
            ConfigError::Core(e) => write!(f, "{e}"),
            ConfigError::Invalid(m) => write!(f, "config error: {m}"),
        }
    }
}

impl From<guichard_core::Error> for ConfigError {
    fn from(e: guichard_core::Error) -> Self {
        ConfigError::Core(e)
    }
}

pub fn parse_spec(src: &str) -> Result<FamilySpec, ConfigError> {
    serde_json::from_str(src).map_err(|e| ConfigError::Json(e.to_string()))
}

fn one_constant_case(s: &str) -> Result<OneConstantCase, ConfigError> {
    match s {
        "a" => Ok(OneConstantCase::A),
        "b1" => Ok(OneConstantCase::B1),
        "b2" => Ok(OneConstantCase::B2),
        "c" => Ok(OneConstantCase::C),
        other => Err(ConfigError::Invalid(format!(
            "unknown one_constant case `{other}` (expected a, b1, b2, c)"
        ))),
    }
}

fn dilation_case(s: &str) -> Result<DilationCase, ConfigError> {
    match s {
        "a" => Ok(DilationCase::A),
        "b1" => Ok(DilationCase::B1),
        "b2" => Ok(DilationCase::B2),
        "c" => Ok(DilationCase::C),
        other => Err(ConfigError::Invalid(format!(
            "unknown dilation case `{other}` (expected a, b1, b2, c)"
        ))),
    }
}

impl FamilySpec {
    pub fn build(&self) -> Result<GuichardNet, ConfigError> {
        match self {
            FamilySpec::Translation {
                alpha,
                c,
                lambda,
                l1_0,
                sign_l1prime,
                xi_range,
            } => {
                let tc = TranslationConstants {
                    alpha: *alpha,
                    c: *c,
                    lambda: *lambda,
                    l1_0: *l1_0,
                    sign_l1prime: *sign_l1prime,
                };
                let net = match xi_range {
                    Some(range) => build_translation_family(tc, *range)?,
                    None => build_translation_family_maximal(tc, (-10.0, 10.0))?,
                };
                Ok(net)
            }
            FamilySpec::OneConstant {
                case,
                lambda_const,
                b,
                xi0,
                alpha,
                phi_poly,
                domain,
            } => {
                let fam = OneConstantFamily {
                    case: one_constant_case(case)?,
                    lambda_const: *lambda_const,
                    b: *b,
                    xi0: *xi0,
                    alpha: *alpha,
                    user_phi: phi_poly.as_ref().map(|cs| PhiFunction::polynomial(cs)),
                };
                Ok(build_one_constant_family(
                    fam,
                    Box3::new(domain.lo, domain.hi)?,
                )?)
            }
            FamilySpec::Dilation {
                case,
                a_vec,
                b_vec,
                lambda_const,
                phi_constants,
                domain,
            } => {
                let d = DilationConstants {
                    case: dilation_case(case)?,
                    a_vec: *a_vec,
                    b_vec: *b_vec,
                    lambda_const: *lambda_const,
                    k0: phi_constants[0],
                    k1: phi_constants[1],
                };
                Ok(build_dilation_family(d, Box3::new(domain.lo, domain.hi)?)?)
            }
            FamilySpec::Constant { l } => {
                let l = *l;
                Ok(GuichardNet::from_closures(
                    Box3::new([0.0; 3], [1.0; 3])?,
                    move |_| l,
                    |_| [[0.0; 3]; 3],
                ))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_translation_spec() {
        let spec = parse_spec(
            r#"{"type": "translation", "alpha": [1.7320508075688772, 1.0, 2.0],
                "c": [1.0, -1.0, -2.0], "lambda": -4.0, "l1_0": 1.0}"#,
        )
        .unwrap();
        let net = spec.build().unwrap();
        assert!(net.translation().is_some());
    }

    #[test]
    fn rejects_unknown_fields() {
        let err = parse_spec(r#"{"type": "translation", "frobnicate": 1}"#);
        assert!(matches!(err, Err(ConfigError::Json(_))));
    }

    #[test]
    fn rejects_unknown_case() {
        let spec = parse_spec(
            r#"{"type": "one_constant", "case": "z", "lambda_const": 1.0,
                "alpha": [0, 1, 1],
                "domain": {"lo": [0, 0, 0], "hi": [1, 1, 1]}}"#,
        )
        .unwrap();
        assert!(matches!(spec.build(), Err(ConfigError::Invalid(_))));
    }
}
