//! Plain-text material definitions.
//!
//! ```text
//! # comment
//! [my-gold]
//! model = drude
//! omega_p_ev = 9.0
//! gamma_ev = 0.035
//! mu0 = 1
//!
//! [my-silica]
//! model = real-dielectric
//! oscillator = 1.098 13.38 0      # contribution C_j, omega_j (eV), gamma_j (eV)
//! oscillator = 1.712 0.1237 0.01
//! sigma0_invs = 29.7
//! gap_ev = 9.0
//! ```
//!
//! Oscillators are given by their static contribution C_j = g_j/ω_j²;
//! `oscillator_g` takes the strength g_j in eV² instead.

use std::collections::BTreeMap;

use super::{
    ConductivityLaw, ConductivityMode, DrudeParams, MaterialModel, NonlocalDrudeParams,
    Oscillator, OscillatorSet, Response, DEFAULT_NONLOCAL_VELOCITY,
};
use crate::error::{CasimirError, Result};

#[derive(Default)]
struct Section {
    name: String,
    line: usize,
    scalars: BTreeMap<String, (f64, usize)>,
    words: BTreeMap<String, (String, usize)>,
    oscillators: Vec<Oscillator>,
}

fn err(line: usize, message: impl Into<String>) -> CasimirError {
    CasimirError::Ingestion {
        line: Some(line),
        message: message.into(),
    }
}

const WORD_KEYS: &[&str] = &["model", "conductivity"];

/// Parses every section of a material file, in file order.
pub fn parse_materials(text: &str) -> Result<Vec<(String, MaterialModel)>> {
    let mut sections: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| err(line_no, "unterminated section header"))?
                .trim();
            if name.is_empty() {
                return Err(err(line_no, "empty section name"));
            }
            if sections.iter().any(|s| s.name == name) {
                return Err(err(line_no, format!("duplicate section '{name}'")));
            }
            sections.push(Section {
                name: name.to_string(),
                line: line_no,
                ..Default::default()
            });
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(line_no, "expected 'key = value'"))?;
        let key = key.trim().to_ascii_lowercase();
        let value = value.trim();
        let sec = sections
            .last_mut()
            .ok_or_else(|| err(line_no, "key outside of a [section]"))?;
        if WORD_KEYS.contains(&key.as_str()) {
            sec.words.insert(key, (value.to_ascii_lowercase(), line_no));
        } else if key == "oscillator" || key == "oscillator_g" {
            let nums: Vec<f64> = value
                .split_whitespace()
                .map(|t| t.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| err(line_no, format!("bad oscillator: {e}")))?;
            if nums.len() != 3 {
                return Err(err(line_no, "oscillator needs three numbers"));
            }
            let strength = if key == "oscillator" {
                nums[0] * nums[1] * nums[1]
            } else {
                nums[0]
            };
            sec.oscillators.push(Oscillator {
                strength,
                frequency: nums[1],
                damping: nums[2],
            });
        } else {
            let v: f64 = value
                .parse()
                .map_err(|_| err(line_no, format!("'{key}' expects a number, got '{value}'")))?;
            if !v.is_finite() {
                return Err(err(line_no, format!("'{key}' must be finite")));
            }
            sec.scalars.insert(key, (v, line_no));
        }
    }
    sections.into_iter().map(build).collect()
}

fn build(sec: Section) -> Result<(String, MaterialModel)> {
    let at = |e: CasimirError, line: usize| match e {
        CasimirError::Config(m) | CasimirError::Domain(m) => err(line, m),
        other => other,
    };
    let (model, model_line) = sec
        .words
        .get("model")
        .cloned()
        .ok_or_else(|| err(sec.line, format!("section '{}' has no model", sec.name)))?;
    let get = |k: &str| sec.scalars.get(k).map(|&(v, _)| v);
    let need = |k: &str| get(k).ok_or_else(|| err(sec.line, format!("missing '{k}'")));
    let drude = || -> Result<DrudeParams> {
        DrudeParams::new(
            need("omega_p_ev")?,
            get("gamma_ev").unwrap_or(0.0),
            get("gamma_residual_ev").unwrap_or(0.0),
            get("t_room_k").unwrap_or(300.0),
        )
        .map_err(|e| at(e, sec.line))
    };
    let oscillators =
        || OscillatorSet::new(sec.oscillators.clone()).map_err(|e| at(e, sec.line));

    let response = match model.as_str() {
        "ideal-metal" => Response::IdealMetal,
        "drude" => Response::Drude(drude()?),
        "plasma" => Response::Plasma {
            omega_p: need("omega_p_ev")?,
        },
        "generalized-plasma" => Response::GeneralizedPlasma {
            omega_p: need("omega_p_ev")?,
            oscillators: oscillators()?,
        },
        "ideal-dielectric" => Response::IdealDielectric(oscillators()?),
        "real-dielectric" => {
            let mode = match sec.words.get("conductivity").map(|(w, l)| (w.as_str(), *l)) {
                None | Some(("activated", _)) => ConductivityMode::Activated,
                Some(("constant", _)) => ConductivityMode::Constant,
                Some((w, l)) => return Err(err(l, format!("unknown conductivity mode '{w}'"))),
            };
            let law = ConductivityLaw::new(
                need("sigma0_invs")?,
                get("gap_ev").unwrap_or(0.0),
                get("t_ref_k").unwrap_or(300.0),
                mode,
            )
            .map_err(|e| at(e, sec.line))?;
            Response::RealDielectric {
                oscillators: oscillators()?,
                conductivity: law,
            }
        }
        "nonlocal-drude" => Response::NonlocalDrude(
            NonlocalDrudeParams::new(
                drude()?,
                get("v_t_m_s").unwrap_or(DEFAULT_NONLOCAL_VELOCITY),
                get("v_l_m_s").unwrap_or(DEFAULT_NONLOCAL_VELOCITY),
            )
            .map_err(|e| at(e, sec.line))?,
        ),
        other => return Err(err(model_line, format!("unknown model '{other}'"))),
    };
    if let Response::Plasma { omega_p } | Response::GeneralizedPlasma { omega_p, .. } = response {
        if !(omega_p > 0.0) {
            return Err(err(sec.line, "omega_p_ev must be positive"));
        }
    }
    let m = MaterialModel::new(response)
        .with_mu0(get("mu0").unwrap_or(1.0))
        .map_err(|e| at(e, sec.scalars.get("mu0").map_or(sec.line, |&(_, l)| l)))?;
    Ok((sec.name, m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_two_sections() {
        let text = "# materials\n[gold]\nmodel = drude\nomega_p_ev = 9.0\ngamma_ev = 0.035\n\n\
                    [silica]\nmodel = real-dielectric\noscillator = 1.098 13.38 0\n\
                    oscillator = 1.712 0.1237 0.01\nsigma0_invs = 29.7\ngap_ev = 9\n\
                    [ni]\nmodel = plasma\nomega_p_ev = 4.89\nmu0 = 110\n";
        let mats = parse_materials(text).unwrap();
        assert_eq!(mats.len(), 3);
        assert_eq!(mats[0].0, "gold");
        assert_eq!(mats[0].1, crate::materials::catalog::lookup("drude:au").unwrap());
        match &mats[1].1.response {
            Response::RealDielectric { oscillators, .. } => {
                assert!((oscillators.static_permittivity() - 3.81).abs() < 1e-12)
            }
            r => panic!("{r:?}"),
        }
        assert_eq!(mats[2].1.mu0, 110.0);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_materials("[a]\nmodel = drude\nomega_p_ev = nine\n").unwrap_err();
        assert_eq!(
            e,
            CasimirError::Ingestion {
                line: Some(3),
                message: "'omega_p_ev' expects a number, got 'nine'".into()
            }
        );
        let e = parse_materials("model = drude\n").unwrap_err();
        assert!(matches!(e, CasimirError::Ingestion { line: Some(1), .. }));
        let e = parse_materials("[a]\nmodel = quark\n").unwrap_err();
        assert!(matches!(e, CasimirError::Ingestion { line: Some(2), .. }));
        let e = parse_materials("[a]\nmodel = plasma\n").unwrap_err();
        assert!(matches!(e, CasimirError::Ingestion { line: Some(1), .. }));
    }
}
