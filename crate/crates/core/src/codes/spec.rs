use std::fmt;

use super::{alpha, cex_elias, cex_nonmonotone, elias_iterate, CodeHandle, CodeKind};
use crate::construct::{dominating_code, CodeSequence, ConstructConfig};
use crate::error::{Error, Result};
use crate::hierarchy::{Hierarchy, OrdinalCNF};

/// Parsed form of the code-spec mini-language.
///
/// ```text
/// spec := "alpha" | "cex-elias" | "cex-nonmono"
///       | "elias" ["^" NUM] "(" spec ")"
///       | "dom" "(" spec ("," spec)* ")"
///       | "hier" "(" ordinal ")"
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodeSpec {
    Alpha,
    Elias { times: u32, inner: Box<CodeSpec> },
    CexElias,
    CexNonmono,
    Dom(Vec<CodeSpec>),
    Hier(OrdinalCNF),
}

impl CodeSpec {
    /// Construct the handle this spec names. The handle's spec string is the
    /// canonical rendering of `self`.
    pub fn build(&self, config: &ConstructConfig) -> Result<CodeHandle> {
        let handle = match self {
            CodeSpec::Alpha => alpha(),
            CodeSpec::CexElias => cex_elias(),
            CodeSpec::CexNonmono => CodeHandle::new(cex_nonmonotone(), CodeKind::Raw, "")?,
            CodeSpec::Elias { times, inner } => elias_iterate(&inner.build(config)?, *times)?,
            CodeSpec::Dom(members) => {
                let handles = members.iter().map(|m| m.build(config)).collect::<Result<Vec<_>>>()?;
                dominating_code(&CodeSequence::with_tail(handles)?, config)?
            }
            CodeSpec::Hier(ordinal) => Hierarchy::shared(config).code(ordinal)?,
        };
        Ok(handle.with_spec(self.to_string()))
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeSpec::Alpha => f.write_str("alpha"),
            CodeSpec::CexElias => f.write_str("cex-elias"),
            CodeSpec::CexNonmono => f.write_str("cex-nonmono"),
            CodeSpec::Elias { times: 1, inner } => write!(f, "elias({inner})"),
            CodeSpec::Elias { times, inner } => write!(f, "elias^{times}({inner})"),
            CodeSpec::Dom(members) => {
                f.write_str("dom(")?;
                for (i, m) in members.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{m}")?;
                }
                f.write_str(")")
            }
            CodeSpec::Hier(a) => write!(f, "hier({a})"),
        }
    }
}

pub fn parse_code_spec(text: &str) -> Result<CodeSpec> {
    let mut p = Parser { src: text, pos: 0 };
    let spec = p.spec()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(Error::parse(p.pos, "unexpected trailing input"));
    }
    Ok(spec)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, ch: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(ch) {
            self.pos += ch.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, ch: char) -> Result<()> {
        if self.eat(ch) {
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected `{ch}`")))
        }
    }

    fn ident(&mut self) -> &str {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '-'))
            .unwrap_or(self.rest().len());
        let start = self.pos;
        self.pos += len;
        &self.src[start..self.pos]
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(Error::parse(self.pos, "expected a decimal number"));
        }
        let start = self.pos;
        self.pos += len;
        self.src[start..self.pos]
            .parse()
            .map_err(|_| Error::parse(start, "number out of range"))
    }

    fn spec(&mut self) -> Result<CodeSpec> {
        self.skip_ws();
        let start = self.pos;
        match self.ident() {
            "alpha" => Ok(CodeSpec::Alpha),
            "cex-elias" => Ok(CodeSpec::CexElias),
            "cex-nonmono" => Ok(CodeSpec::CexNonmono),
            "elias" => {
                let times = if self.eat('^') { self.number()? } else { 1 };
                self.expect('(')?;
                let inner = self.spec()?;
                self.expect(')')?;
                // Normal form: no elias^0, no directly nested elias.
                Ok(match inner {
                    _ if times == 0 => inner,
                    CodeSpec::Elias { times: t, inner } => CodeSpec::Elias {
                        times: times
                            .checked_add(t)
                            .ok_or_else(|| Error::parse(start, "iteration count out of range"))?,
                        inner,
                    },
                    inner => CodeSpec::Elias {
                        times,
                        inner: Box::new(inner),
                    },
                })
            }
            "dom" => {
                self.expect('(')?;
                let mut members = vec![self.spec()?];
                while self.eat(',') {
                    members.push(self.spec()?);
                }
                self.expect(')')?;
                Ok(CodeSpec::Dom(members))
            }
            "hier" => {
                self.expect('(')?;
                let inner_start = self.pos;
                let len = self
                    .rest()
                    .find(')')
                    .ok_or_else(|| Error::parse(self.src.len(), "expected `)`"))?;
                let text = &self.src[inner_start..inner_start + len];
                let ordinal = OrdinalCNF::parse(text).map_err(|e| match e {
                    Error::Parse { position, message } => Error::parse(inner_start + position, message),
                    other => other,
                })?;
                self.pos = inner_start + len;
                self.expect(')')?;
                Ok(CodeSpec::Hier(ordinal))
            }
            "" => Err(Error::parse(start, "expected a code name")),
            other => Err(Error::parse(start, format!("unknown code `{other}`"))),
        }
    }
}
