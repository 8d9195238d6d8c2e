use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Monomial;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    Lex,
    DegLex,
    DegRevLex,
}

impl OrderKind {
    pub fn name(&self) -> &'static str {
        match self {
            OrderKind::Lex => "lex",
            OrderKind::DegLex => "deglex",
            OrderKind::DegRevLex => "degrevlex",
        }
    }
}

/// A monomial order given by a kind and a variable ranking.
///
/// `perm[0]` is the most significant variable. An empty ranking is the
/// identity `x1 > x2 > ... > xn` for any number of variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermOrder {
    kind: OrderKind,
    perm: Vec<usize>,
}

impl Default for TermOrder {
    fn default() -> Self {
        TermOrder::degrevlex()
    }
}

impl TermOrder {
    pub fn new(kind: OrderKind, perm: Vec<usize>) -> Result<TermOrder> {
        let mut seen = vec![false; perm.len()];
        for &v in &perm {
            if v >= perm.len() || seen[v] {
                return Err(Error::Invalid(format!(
                    "variable ranking {perm:?} is not a permutation"
                )));
            }
            seen[v] = true;
        }
        Ok(TermOrder { kind, perm })
    }

    pub fn lex() -> TermOrder {
        TermOrder {
            kind: OrderKind::Lex,
            perm: Vec::new(),
        }
    }

    pub fn deglex() -> TermOrder {
        TermOrder {
            kind: OrderKind::DegLex,
            perm: Vec::new(),
        }
    }

    pub fn degrevlex() -> TermOrder {
        TermOrder {
            kind: OrderKind::DegRevLex,
            perm: Vec::new(),
        }
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    /// Variable ranking, empty for the identity.
    pub fn ranking(&self) -> &[usize] {
        &self.perm
    }

    /// Check that the ranking (if any) covers exactly `n` variables.
    pub fn check_arity(&self, n: usize) -> Result<()> {
        if !self.perm.is_empty() && self.perm.len() != n {
            return Err(Error::ArityError {
                expected: n,
                found: self.perm.len(),
            });
        }
        Ok(())
    }

    #[inline]
    fn exp(&self, m: &Monomial, pos: usize) -> u32 {
        if self.perm.is_empty() {
            m.0[pos]
        } else {
            m.0[self.perm[pos]]
        }
    }

    fn lex_cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        (0..a.0.len())
            .map(|i| self.exp(a, i).cmp(&self.exp(b, i)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        debug_assert_eq!(a.0.len(), b.0.len());
        match self.kind {
            OrderKind::Lex => self.lex_cmp(a, b),
            OrderKind::DegLex => a
                .degree()
                .cmp(&b.degree())
                .then_with(|| self.lex_cmp(a, b)),
            OrderKind::DegRevLex => a.degree().cmp(&b.degree()).then_with(|| {
                (0..a.0.len())
                    .rev()
                    .map(|i| self.exp(b, i).cmp(&self.exp(a, i)))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            }),
        }
    }

    /// Parse `lex`, `deglex`, `degrevlex`, optionally followed by a 1-based
    /// variable ranking, e.g. `lex:3,1,2`.
    pub fn parse(s: &str) -> Result<TermOrder> {
        let (kind, rest) = match s.split_once(':') {
            Some((k, r)) => (k, Some(r)),
            None => (s, None),
        };
        let kind = match kind.trim() {
            "lex" => OrderKind::Lex,
            "deglex" => OrderKind::DegLex,
            "degrevlex" | "grevlex" => OrderKind::DegRevLex,
            other => return Err(Error::Invalid(format!("unknown term order `{other}`"))),
        };
        let perm = match rest {
            None => Vec::new(),
            Some(r) => r
                .split(',')
                .map(|t| {
                    t.trim()
                        .trim_start_matches('x')
                        .parse::<usize>()
                        .ok()
                        .filter(|&v| v >= 1)
                        .map(|v| v - 1)
                        .ok_or_else(|| Error::Invalid(format!("bad variable `{t}` in ranking")))
                })
                .collect::<Result<_>>()?,
        };
        TermOrder::new(kind, perm)
    }
}

impl fmt::Display for TermOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.name())?;
        if !self.perm.is_empty() {
            let r: Vec<String> = self.perm.iter().map(|v| (v + 1).to_string()).collect();
            write!(f, ":{}", r.join(","))?;
        }
        Ok(())
    }
}
