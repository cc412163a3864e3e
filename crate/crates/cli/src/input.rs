//! Complex literals are `re,im` (or a bare real), separated by whitespace.

use std::fs;
use std::path::Path;

use drroots::{CoeffForm, Complex64, RootForm};

use crate::error::CliError;

pub fn parse_complex(token: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::Parse(format!("bad complex literal {token:?}, expected re,im"));
    let (re, im) = match token.split_once(',') {
        Some((re, im)) => (re, im),
        None => (token, "0"),
    };
    let re: f64 = re.trim().parse().map_err(|_| bad())?;
    let im: f64 = im.trim().parse().map_err(|_| bad())?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

pub fn parse_list(text: &str) -> Result<Vec<Complex64>, CliError> {
    let values: Vec<Complex64> = text
        .lines()
        .map(|line| line.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace)
        .map(parse_complex)
        .collect::<Result<_, _>>()?;
    if values.is_empty() {
        return Err(CliError::Parse("empty coefficient list".into()));
    }
    Ok(values)
}

pub fn read_list(path: &Path) -> Result<Vec<Complex64>, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_list(&text)
}

/// A polynomial as given on the command line.
pub enum Polynomial {
    Coeffs(CoeffForm),
    Roots(RootForm),
}

impl Polynomial {
    pub fn from_sources(
        coeffs: Option<&str>,
        roots: Option<&str>,
        file: Option<&Path>,
    ) -> Result<Polynomial, CliError> {
        let given = [coeffs.is_some(), roots.is_some(), file.is_some()]
            .iter()
            .filter(|&&b| b)
            .count();
        if given != 1 {
            return Err(CliError::Usage(
                "give exactly one of --coeffs, --roots or --file".into(),
            ));
        }
        let parse_err = |e: drroots::Error| CliError::Parse(e.to_string());
        if let Some(text) = roots {
            let r = RootForm::monic(parse_list(text)?).map_err(parse_err)?;
            return Ok(Polynomial::Roots(r));
        }
        let list = match (coeffs, file) {
            (Some(text), _) => parse_list(text)?,
            (_, Some(path)) => read_list(path)?,
            _ => unreachable!("checked above"),
        };
        let p = CoeffForm::new(list).map_err(parse_err)?;
        Ok(Polynomial::Coeffs(p))
    }
}
