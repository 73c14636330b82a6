//! Parser for Lagrangian models given as polynomials in the fiber
//! coordinates, e.g. `rho^2 + 2*z^2` or `0.5*rho*z`.
//!
//! The grammar is deliberately small: terms joined by `+`/`-`, factors
//! joined by `*`, each factor a decimal literal or `rho`/`z` with an
//! optional integer power. Partials are taken term by term, so the model
//! carries exact derivatives. Models that are not fiber 2-homogeneous are
//! rejected.

use std::sync::Arc;

use tangent_harmonics::finsler::LagrangianModel;
use tangent_harmonics::geometry::RadialFn;

/// One `c * rho^a * z^b` term.
type Monomial = (f64, u32, u32);

pub fn parse(src: &str) -> Result<LagrangianModel, String> {
    let monomials = parse_monomials(src)?;
    let model = model_from(&monomials);
    model
        .check_homogeneity(
            &[(1.0, 0.8, 0.5), (1.3, 1.1, -0.7)],
            &[0.5, 2.0, 10.0],
            1e-6,
        )
        .map_err(|e| e.to_string())?;
    Ok(model)
}

fn model_from(monomials: &[Monomial]) -> LagrangianModel {
    let d_rho: Vec<Monomial> = monomials
        .iter()
        .filter(|&&(_, a, _)| a > 0)
        .map(|&(c, a, b)| (c * f64::from(a), a - 1, b))
        .collect();
    let d_z: Vec<Monomial> = monomials
        .iter()
        .filter(|&&(_, _, b)| b > 0)
        .map(|&(c, a, b)| (c * f64::from(b), a, b - 1))
        .collect();
    LagrangianModel::new(
        poly_fn(monomials.to_vec()),
        poly_fn(d_rho.clone()),
        poly_fn(d_z.clone()),
        poly_fn(derive(&d_rho, 0)),
        poly_fn(derive(&d_rho, 1)),
        poly_fn(derive(&d_z, 1)),
    )
}

fn derive(monomials: &[Monomial], axis: usize) -> Vec<Monomial> {
    monomials
        .iter()
        .filter_map(|&(c, a, b)| match axis {
            0 if a > 0 => Some((c * f64::from(a), a - 1, b)),
            1 if b > 0 => Some((c * f64::from(b), a, b - 1)),
            _ => None,
        })
        .collect()
}

fn poly_fn(monomials: Vec<Monomial>) -> RadialFn {
    Arc::new(move |_r, rho, z| {
        monomials
            .iter()
            .map(|&(c, a, b)| c * rho.powi(a as i32) * z.powi(b as i32))
            .sum()
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Rho,
    Z,
    Power(u32),
    Times,
    Plus,
    Minus,
}

fn tokenize(src: &str) -> Result<Vec<Token>, String> {
    let compact: String = src.split_whitespace().collect();
    let mut tokens = Vec::new();
    let bytes = compact.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            b'-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            b'*' => {
                tokens.push(Token::Times);
                i += 1;
            }
            b'^' => {
                let start = i + 1;
                let mut j = start;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j == start {
                    return Err("'^' must be followed by a nonnegative integer".into());
                }
                let exp: u32 = compact[start..j]
                    .parse()
                    .map_err(|_| format!("exponent '{}' is out of range", &compact[start..j]))?;
                tokens.push(Token::Power(exp));
                i = j;
            }
            b'0'..=b'9' | b'.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                let lit = &compact[start..i];
                let value: f64 = lit
                    .parse()
                    .map_err(|_| format!("'{lit}' is not a valid coefficient"))?;
                tokens.push(Token::Number(value));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                    i += 1;
                }
                match &compact[start..i] {
                    "rho" | "rhobar" => tokens.push(Token::Rho),
                    "z" | "zbar" => tokens.push(Token::Z),
                    name => return Err(format!("unknown variable '{name}'; expected rho or z")),
                }
            }
            c => return Err(format!("unexpected character '{}'", char::from(c))),
        }
    }
    Ok(tokens)
}

fn parse_monomials(src: &str) -> Result<Vec<Monomial>, String> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Err("the Lagrangian expression is empty".into());
    }
    let mut monomials = Vec::new();
    let mut pos = 0;
    loop {
        let mut sign = 1.0;
        while let Some(tok) = tokens.get(pos) {
            match tok {
                Token::Plus => pos += 1,
                Token::Minus => {
                    sign = -sign;
                    pos += 1;
                }
                _ => break,
            }
        }
        if pos == tokens.len() {
            return Err("expected a term after '+' or '-'".into());
        }
        let (monomial, next) = parse_term(&tokens, pos)?;
        monomials.push((sign * monomial.0, monomial.1, monomial.2));
        pos = next;
        match tokens.get(pos) {
            None => break,
            Some(Token::Plus) | Some(Token::Minus) => continue,
            Some(tok) => return Err(format!("expected '+', '-' or end of input, found {tok:?}")),
        }
    }
    Ok(monomials)
}

/// Parses `factor (* factor)*` starting at `pos`; returns the folded
/// monomial and the position after it.
fn parse_term(tokens: &[Token], mut pos: usize) -> Result<(Monomial, usize), String> {
    let mut coefficient = 1.0;
    let mut rho_power = 0u32;
    let mut z_power = 0u32;
    loop {
        match tokens.get(pos) {
            Some(Token::Number(c)) => {
                coefficient *= c;
                pos += 1;
            }
            Some(var @ (Token::Rho | Token::Z)) => {
                let var = var.clone();
                pos += 1;
                let exp = match tokens.get(pos) {
                    Some(Token::Power(e)) => {
                        pos += 1;
                        *e
                    }
                    _ => 1,
                };
                match var {
                    Token::Rho => rho_power += exp,
                    _ => z_power += exp,
                }
            }
            Some(tok) => return Err(format!("expected a coefficient or variable, found {tok:?}")),
            None => return Err("expected a factor, found end of input".into()),
        }
        match tokens.get(pos) {
            Some(Token::Times) => pos += 1,
            Some(Token::Plus) | Some(Token::Minus) | None => {
                return Ok(((coefficient, rho_power, z_power), pos))
            }
            Some(tok) => {
                return Err(format!(
                    "expected '*' between factors, found {tok:?}; write products explicitly"
                ))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_anisotropic_model() {
        let model = parse("rho^2 + 2*z^2").unwrap();
        let reference = LagrangianModel::anisotropic_quadratic();
        for &(r, rho, z) in &[(1.0, 0.7, -0.4), (2.0, 1.3, 0.9)] {
            assert!((model.value(r, rho, z) - reference.value(r, rho, z)).abs() < 1e-14);
            assert!((model.l_rho(r, rho, z) - reference.l_rho(r, rho, z)).abs() < 1e-14);
            assert!((model.l_z(r, rho, z) - reference.l_z(r, rho, z)).abs() < 1e-14);
            assert!((model.l_rho_z(r, rho, z) - reference.l_rho_z(r, rho, z)).abs() < 1e-14);
        }
    }

    #[test]
    fn accepts_cross_terms_and_whitespace() {
        let model = parse(" 0.5 * rho * z + rho ^ 2 ").unwrap();
        assert!((model.value(1.0, 2.0, 3.0) - (3.0 + 4.0)).abs() < 1e-14);
        assert!((model.l_z(1.0, 2.0, 3.0) - 1.0).abs() < 1e-14);
        assert!((model.l_rho_rho(1.0, 2.0, 3.0) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn folds_repeated_variables() {
        let model = parse("rho*rho - z*z^1").unwrap();
        assert!((model.value(1.0, 3.0, 2.0) - 5.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_inhomogeneous_models() {
        assert!(parse("rho^2*z").unwrap_err().contains("deviates"));
        assert!(parse("rho^3 - z").unwrap_err().contains("deviates"));
        assert!(parse("rho^2 + 1").unwrap_err().contains("deviates"));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(parse("2rho^2").unwrap_err().contains("'*'"));
        assert!(parse("rho^2 +").unwrap_err().contains("expected a term"));
        assert!(parse("").unwrap_err().contains("empty"));
        assert!(parse("rho^2 + w^2").unwrap_err().contains("unknown variable"));
        assert!(parse("rho^-2").unwrap_err().contains("nonnegative"));
    }
}
