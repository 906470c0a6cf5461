use std::path::Path;

use super::{content_lines, parse_real, read_file, DatasetError};
use crate::quantities::ConstantsSet;

/// CODATA 2018 values shipped with the crate.
pub const BUNDLED_CONSTANTS: &str = include_str!("../../data/codata2018.const");

/// Parses `alpha <value>`, `me_c2_hz <value>` and `label <text>` lines.
pub fn parse_constants(text: &str) -> Result<ConstantsSet, DatasetError> {
    let mut alpha = None;
    let mut rest_frequency = None;
    let mut label = None;
    for (line, content) in content_lines(text) {
        let (key, value) = content
            .split_once(char::is_whitespace)
            .map(|(k, v)| (k, v.trim()))
            .ok_or_else(|| {
                DatasetError::at_line(line, format!("expected '<key> <value>', got '{content}'"))
            })?;
        let slot_taken = match key {
            "alpha" => alpha.replace(parse_real(value, line, "alpha")?).is_some(),
            "me_c2_hz" => rest_frequency
                .replace(parse_real(value, line, "me_c2_hz")?)
                .is_some(),
            "label" => label.replace(value.to_string()).is_some(),
            other => {
                return Err(DatasetError::at_line(
                    line,
                    format!("unknown key '{other}'"),
                ))
            }
        };
        if slot_taken {
            return Err(DatasetError::at_line(line, format!("'{key}' given twice")));
        }
    }
    let missing = |k: &str| DatasetError::invalid(format!("constants file lacks '{k}'"));
    ConstantsSet::new(
        alpha.ok_or_else(|| missing("alpha"))?,
        rest_frequency.ok_or_else(|| missing("me_c2_hz"))?,
        label.ok_or_else(|| missing("label"))?,
    )
    .map_err(|e| DatasetError::invalid(e.to_string()))
}

pub fn load_constants(path: impl AsRef<Path>) -> Result<ConstantsSet, DatasetError> {
    let path = path.as_ref();
    parse_constants(&read_file(path)?).map_err(|e| e.in_file(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_constants_parse() {
        let c = parse_constants(BUNDLED_CONSTANTS).unwrap();
        assert_eq!(c.alpha(), 7.2973525693e-3);
        assert!((c.electron_rest_frequency() / 1.23559e20 - 1.0).abs() < 1e-5);
        assert_eq!(c.label(), "CODATA2018");
    }

    #[test]
    fn diagnostics() {
        let e = parse_constants("alpha 7e-3\nalpha 7e-3\n").unwrap_err();
        assert_eq!(e.line(), Some(2));
        assert!(parse_constants("alpha 7e-3\nme_c2_hz 1e20\n").is_err());
        assert!(parse_constants("alpha 0.5\nme_c2_hz 1e20\nlabel x\n").is_err());
        let e = parse_constants("# c\nbeta 1\n").unwrap_err();
        assert_eq!(e.line(), Some(2));
    }
}
