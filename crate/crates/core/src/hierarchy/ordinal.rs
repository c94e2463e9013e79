use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// An ordinal below `w^w` in Cantor normal form.
///
/// Terms are `(exponent, coefficient)` pairs with strictly decreasing
/// exponents and positive coefficients; the empty sequence is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct OrdinalCNF {
    terms: Vec<(u64, u64)>,
}

impl OrdinalCNF {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn finite(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            OrdinalCNF { terms: vec![(0, n)] }
        }
    }

    /// `w^exponent`.
    pub fn omega_pow(exponent: u64) -> Self {
        OrdinalCNF {
            terms: vec![(exponent, 1)],
        }
    }

    /// Build from terms, rejecting anything not in normal form.
    pub fn from_terms(terms: Vec<(u64, u64)>) -> Result<Self> {
        for (i, &(e, c)) in terms.iter().enumerate() {
            if c == 0 {
                return Err(Error::Domain(format!("term {i} has coefficient 0")));
            }
            if i > 0 && terms[i - 1].0 <= e {
                return Err(Error::Domain(format!("exponents not decreasing at term {i}")));
            }
        }
        Ok(OrdinalCNF { terms })
    }

    pub fn terms(&self) -> &[(u64, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_limit(&self) -> bool {
        self.terms.last().is_some_and(|&(e, _)| e >= 1)
    }

    /// `b` with `self = b + 1`, if `self` is a successor.
    pub fn predecessor(&self) -> Option<Self> {
        let &(e, c) = self.terms.last()?;
        if e != 0 {
            return None;
        }
        let mut terms = self.terms.clone();
        if c == 1 {
            terms.pop();
        } else {
            terms.last_mut().expect("non-empty").1 -= 1;
        }
        Some(OrdinalCNF { terms })
    }

    pub fn successor(&self) -> Self {
        let mut terms = self.terms.clone();
        match terms.last_mut() {
            Some((0, c)) => *c += 1,
            _ => terms.push((0, 1)),
        }
        OrdinalCNF { terms }
    }

    /// Parse `0`, `K`, `w`, `w^E`, `w*C`, `w^E*C` and `+`-joined sums of
    /// those in normal form. `ω` is accepted for `w`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut terms: Vec<(u64, u64)> = Vec::new();
        let mut pos = 0usize;
        let bytes_len = text.len();
        let skip_ws = |pos: &mut usize| {
            while text[*pos..].starts_with(char::is_whitespace) {
                *pos += text[*pos..].chars().next().map_or(1, char::len_utf8);
            }
        };
        let number = |pos: &mut usize| -> Result<u64> {
            skip_ws(pos);
            let len = text[*pos..]
                .find(|c: char| !c.is_ascii_digit())
                .unwrap_or(bytes_len - *pos);
            if len == 0 {
                return Err(Error::parse(*pos, "expected a decimal number"));
            }
            let start = *pos;
            *pos += len;
            text[start..*pos]
                .parse()
                .map_err(|_| Error::parse(start, "number out of range"))
        };
        loop {
            skip_ws(&mut pos);
            let start = pos;
            let term = if text[pos..].starts_with('w') || text[pos..].starts_with('ω') {
                pos += text[pos..].chars().next().map_or(1, char::len_utf8);
                skip_ws(&mut pos);
                let exponent = if text[pos..].starts_with('^') {
                    pos += 1;
                    number(&mut pos)?
                } else {
                    1
                };
                skip_ws(&mut pos);
                let coefficient = if text[pos..].starts_with('*') {
                    pos += 1;
                    number(&mut pos)?
                } else {
                    1
                };
                (exponent, coefficient)
            } else {
                (0, number(&mut pos)?)
            };
            if term.1 == 0 {
                let whole = terms.is_empty() && text[pos..].trim().is_empty();
                if !whole || term.0 != 0 {
                    return Err(Error::parse(start, "zero coefficient"));
                }
            } else {
                if terms.last().is_some_and(|&(e, _)| e <= term.0) {
                    return Err(Error::parse(start, "exponents must strictly decrease"));
                }
                terms.push(term);
            }
            skip_ws(&mut pos);
            if pos == bytes_len {
                break;
            }
            if !text[pos..].starts_with('+') {
                return Err(Error::parse(pos, "expected `+` or end of ordinal"));
            }
            pos += 1;
        }
        Ok(OrdinalCNF { terms })
    }

    /// The `i`-th element of the fundamental sequence of a limit ordinal.
    ///
    /// For `a = b + w^e * c` with `e >= 1`:
    /// `a[i] = b + w^e * (c - 1) + w^(e-1) * i`, dropping zero terms.
    pub fn fundamental(&self, i: u64) -> Result<Self> {
        if !self.is_limit() {
            return Err(Error::Domain(format!("{self} is not a limit ordinal")));
        }
        let mut terms = self.terms.clone();
        let (e, c) = terms.pop().expect("limit ordinals are non-zero");
        if c > 1 {
            terms.push((e, c - 1));
        }
        if i > 0 {
            terms.push((e - 1, i));
        }
        Ok(OrdinalCNF { terms })
    }
}

impl Ord for OrdinalCNF {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let ord = a.0.cmp(&b.0).then(a.1.cmp(&b.1));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl PartialOrd for OrdinalCNF {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for OrdinalCNF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, &(e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            match (e, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("w")?,
                (1, c) => write!(f, "w*{c}")?,
                (e, 1) => write!(f, "w^{e}")?,
                (e, c) => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

/// Parse an ordinal below `w^w`.
pub fn parse_ordinal(text: &str) -> Result<OrdinalCNF> {
    OrdinalCNF::parse(text)
}

/// The `i`-th element of the fundamental sequence of `a`.
pub fn fundamental_seq(a: &OrdinalCNF, i: u64) -> Result<OrdinalCNF> {
    a.fundamental(i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(t: &str) -> OrdinalCNF {
        OrdinalCNF::parse(t).unwrap()
    }

    #[test]
    fn parses_normal_forms() {
        assert!(ord("0").is_zero());
        assert_eq!(ord("w*2+3").terms(), &[(1, 2), (0, 3)]);
        assert_eq!(ord("w^2*3+w+4").terms(), &[(2, 3), (1, 1), (0, 4)]);
        assert_eq!(ord("ω^2").terms(), &[(2, 1)]);
        assert_eq!(ord(" w ^ 3 * 2 + 1 ").to_string(), "w^3*2+1");
        assert_eq!(ord("7").terms(), &[(0, 7)]);
    }

    #[test]
    fn rejects_non_normal() {
        for (t, at) in [
            ("1+w", 2),
            ("w+w", 2),
            ("w*0", 0),
            ("w+", 2),
            ("x", 0),
            ("0+1", 0),
            ("w 2", 2),
        ] {
            match OrdinalCNF::parse(t) {
                Err(Error::Parse { position, .. }) => assert_eq!(position, at, "{t}"),
                other => panic!("{t}: {other:?}"),
            }
        }
    }

    #[test]
    fn fundamental_sequences() {
        assert_eq!(ord("w").fundamental(5).unwrap(), ord("5"));
        assert_eq!(ord("w*2").fundamental(3).unwrap(), ord("w+3"));
        assert_eq!(ord("w^2").fundamental(4).unwrap(), ord("w*4"));
        assert_eq!(ord("w^2+w").fundamental(0).unwrap(), ord("w^2"));
        assert!(ord("w+1").fundamental(2).is_err());
        assert!(ord("0").fundamental(2).is_err());
    }

    #[test]
    fn ordering() {
        let chain = ["0", "1", "5", "w", "w+1", "w*2", "w^2", "w^2+w*7+3", "w^3"];
        for pair in chain.windows(2) {
            assert!(ord(pair[0]) < ord(pair[1]), "{pair:?}");
        }
        assert_eq!(ord("w+1").predecessor(), Some(ord("w")));
        assert_eq!(ord("w").predecessor(), None);
        assert_eq!(ord("w").successor(), ord("w+1"));
    }
}
