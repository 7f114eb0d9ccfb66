//! Integer list arguments: `5`, `3,5,7`, `2..12`, or a mix such as `2..6,10`.
//! Ranges are inclusive; an empty or reversed range yields nothing.

use crate::error::CliError;

fn parse_u32(tok: &str, what: &str) -> Result<u32, CliError> {
    tok.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("invalid {what} `{tok}`")))
}

/// Parses a list of plain integers (levels).
pub fn parse_list(spec: &str, what: &str) -> Result<Vec<u32>, CliError> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (parse_u32(a, what)?, parse_u32(b, what)?);
                out.extend(a..=b);
            }
            None => out.push(parse_u32(part, what)?),
        }
    }
    Ok(out)
}

/// Parses even values: ranges keep their even members, single values must
/// themselves be even and at least 2.
pub fn parse_even_list(spec: &str, what: &str) -> Result<Vec<u32>, CliError> {
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (parse_u32(a, what)?, parse_u32(b, what)?);
                out.extend((a.max(2)..=b).filter(|v| v % 2 == 0));
            }
            None => {
                let v = parse_u32(part, what)?;
                if v < 2 || v % 2 == 1 {
                    return Err(CliError::Usage(format!("{what} must be even and at least 2, got {v}")));
                }
                out.push(v);
            }
        }
    }
    Ok(out)
}

pub fn parse_levels(spec: &str) -> Result<Vec<u32>, CliError> {
    let levels = parse_list(spec, "level")?;
    if let Some(bad) = levels.iter().find(|&&n| n < 2) {
        return Err(CliError::Usage(format!("level must be at least 2, got {bad}")));
    }
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_ranges() {
        assert_eq!(parse_list("3,5..7", "N").unwrap(), vec![3, 5, 6, 7]);
        assert_eq!(parse_even_list("2..12", "n").unwrap(), vec![2, 4, 6, 8, 10, 12]);
        assert_eq!(parse_even_list("3..7", "n").unwrap(), vec![4, 6]);
        assert_eq!(parse_even_list("0..4", "n").unwrap(), vec![2, 4]);
        assert!(parse_even_list("12..2", "n").unwrap().is_empty());
        assert!(parse_even_list("", "n").unwrap().is_empty());
        assert!(parse_even_list("3", "n").is_err());
        assert!(parse_levels("1..3").is_err());
        assert!(parse_list("x", "N").is_err());
    }
}
