use std::fmt;
use std::str::FromStr;

use super::QuantityError;

/// Orbital letters for l = 0, 1, 2, ... (J is skipped by convention).
const ORBITAL_LETTERS: &[u8] = b"SPDFGHIKLMNOQRTUVWXYZ";

/// Electron state nL_j with j stored doubled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateLabel {
    n: u32,
    l: u32,
    j2: u32,
}

impl StateLabel {
    pub fn new(n: u32, l: u32, j2: u32) -> Result<Self, QuantityError> {
        if n == 0 {
            return Err(QuantityError::State(
                "principal quantum number must be >= 1".into(),
            ));
        }
        if l >= n {
            return Err(QuantityError::State(format!(
                "l = {l} requires n > {l}, got n = {n}"
            )));
        }
        if (2 * l).abs_diff(j2) != 1 {
            return Err(QuantityError::State(format!(
                "j = {j2}/2 is not l ± 1/2 for l = {l}"
            )));
        }
        Ok(Self { n, l, j2 })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    /// Twice the total angular momentum.
    pub fn j2(&self) -> u32 {
        self.j2
    }

    pub fn is_s_state(&self) -> bool {
        self.l == 0
    }

    /// Same (l, j) with a different principal quantum number.
    pub fn with_n(&self, n: u32) -> Result<Self, QuantityError> {
        Self::new(n, self.l, self.j2)
    }

    /// Label usable in file names: `4P1_2`.
    pub fn file_stem(&self) -> String {
        self.to_string()
            .replace('/', "_")
            .replace('[', "l")
            .replace(']', "-")
    }
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match ORBITAL_LETTERS.get(self.l as usize) {
            Some(&c) => write!(f, "{}{}{}/2", self.n, c as char, self.j2),
            None => write!(f, "{}[{}]{}/2", self.n, self.l, self.j2),
        }
    }
}

impl FromStr for StateLabel {
    type Err = QuantityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_state(s)
    }
}

/// Parses spectroscopic notation such as `4P1/2`, `5g7/2`, `2P_{3/2}` or `3D2.5`.
pub fn parse_state(text: &str) -> Result<StateLabel, QuantityError> {
    let bad = |why: &str| QuantityError::State(format!("cannot parse state '{text}': {why}"));
    let s = text.trim();

    let digits_end = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
    if digits_end == 0 {
        return Err(bad("missing principal quantum number"));
    }
    let n: u32 = s[..digits_end]
        .parse()
        .map_err(|_| bad("principal quantum number"))?;
    let rest = &s[digits_end..];

    let (l, rest) = if let Some(inner) = rest.strip_prefix('[') {
        let close = inner.find(']').ok_or_else(|| bad("unterminated [l]"))?;
        let l: u32 = inner[..close]
            .parse()
            .map_err(|_| bad("orbital number in [l]"))?;
        (l, &inner[close + 1..])
    } else {
        let c = rest
            .chars()
            .next()
            .ok_or_else(|| bad("missing orbital letter"))?;
        let upper = c.to_ascii_uppercase() as u8;
        let l = ORBITAL_LETTERS
            .iter()
            .position(|&x| x == upper)
            .ok_or_else(|| bad("unknown orbital letter"))?;
        (l as u32, &rest[c.len_utf8()..])
    };

    let j_text = rest
        .trim_start_matches('_')
        .trim_start_matches('{')
        .trim_end_matches('}');
    let j2 = parse_j2(j_text)
        .ok_or_else(|| bad("total angular momentum must be k/2 or a half-integer"))?;
    StateLabel::new(n, l, j2)
}

fn parse_j2(text: &str) -> Option<u32> {
    if let Some((num, den)) = text.split_once('/') {
        if den != "2" {
            return None;
        }
        let k: u32 = num.parse().ok()?;
        return (k % 2 == 1).then_some(k);
    }
    let j: f64 = text.parse().ok()?;
    let j2 = 2.0 * j;
    (j2 > 0.0 && j2.fract() == 0.0 && (j2 as u32) % 2 == 1).then_some(j2 as u32)
}
