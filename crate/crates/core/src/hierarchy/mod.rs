//! The fast-growing hierarchy of codes indexed by ordinals below `w^w`.

mod ordinal;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use parking_lot::Mutex;

use crate::codes::{alpha, CodeHandle};
use crate::construct::{dominating_code, CodeSequence, ConstructConfig};
use crate::error::Result;

pub use ordinal::{fundamental_seq, parse_ordinal, OrdinalCNF};

struct Inner {
    config: ConstructConfig,
    memo: Mutex<HashMap<OrdinalCNF, CodeHandle>>,
}

/// A memo table of hierarchy codes built under one configuration.
///
/// `c_0 = alpha`; `c_(b+1)` dominates the constant sequence `c_b`; a limit
/// `c_a` dominates the lazy sequence `i -> c_(a[i])`.
#[derive(Clone)]
pub struct Hierarchy {
    inner: Arc<Inner>,
}

impl Hierarchy {
    pub fn new(config: ConstructConfig) -> Self {
        Hierarchy {
            inner: Arc::new(Inner {
                config,
                memo: Mutex::new(HashMap::new()),
            }),
        }
    }

    /// Process-wide table for `config`; repeated requests share handles.
    pub fn shared(config: &ConstructConfig) -> Hierarchy {
        static TABLES: OnceLock<Mutex<Vec<Hierarchy>>> = OnceLock::new();
        let mut tables = TABLES.get_or_init(|| Mutex::new(Vec::new())).lock();
        if let Some(h) = tables.iter().find(|h| &h.inner.config == config) {
            return h.clone();
        }
        let h = Hierarchy::new(config.clone());
        tables.push(h.clone());
        h
    }

    pub fn config(&self) -> &ConstructConfig {
        &self.inner.config
    }

    /// `c_a`. Construction is lazy; evaluation does the work.
    pub fn code(&self, a: &OrdinalCNF) -> Result<CodeHandle> {
        if let Some(h) = self.inner.memo.lock().get(a) {
            return Ok(h.clone());
        }
        let built = self.build(a)?.with_spec(format!("hier({a})")).memoize();
        Ok(self.inner.memo.lock().entry(a.clone()).or_insert(built).clone())
    }

    fn build(&self, a: &OrdinalCNF) -> Result<CodeHandle> {
        if a.is_zero() {
            return Ok(alpha());
        }
        let sequence = match a.predecessor() {
            Some(b) => CodeSequence::constant(self.code(&b)?),
            None => {
                let this = self.clone();
                let limit = a.clone();
                CodeSequence::from_fn(format!("hier({a})[i]"), None, move |i| {
                    this.code(&limit.fundamental(i)?)
                })
            }
        };
        dominating_code(&sequence, &self.inner.config)
    }
}

/// `c_a` from the default process-wide table.
pub fn hierarchy_code(a: &OrdinalCNF) -> Result<CodeHandle> {
    Hierarchy::shared(&ConstructConfig::default()).code(a)
}
