//! Shared configuration and memoized components.

use std::collections::HashMap;
use std::hash::Hash;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use log::{debug, warn};

use crate::derived::Expansion;
use crate::error::{Error, Result, TermError};
use crate::term::{enumerate_multilinear, Expr, DEFAULT_MAX_DER_ORDER};
use crate::variety::{
    build_di, build_plain, cache_path, decorate_component, load_cache, store_cache, CacheFile,
    Component, DiComponent, VarietyName,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Parallel,
    Sequential,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    /// Largest arity for components, expansions and `express`.
    pub max_arity: usize,
    /// Undecorated BiCom components may go this far.
    pub bicom_plain_max: usize,
    pub max_der: u32,
    pub execution: Execution,
    /// Where echelon bases are persisted; `None` keeps everything in memory.
    pub cache_dir: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_arity: 4,
            bicom_plain_max: 5,
            max_der: DEFAULT_MAX_DER_ORDER,
            execution: Execution::default(),
            cache_dir: None,
        }
    }
}

// One mutex per key: concurrent requests for the same key wait for a single
// computation, requests for different keys proceed independently.
type Slot<V> = Arc<Mutex<Option<Arc<V>>>>;

struct Memo<K, V> {
    slots: Mutex<HashMap<K, Slot<V>>>,
}

impl<K: Eq + Hash + Clone, V> Memo<K, V> {
    fn new() -> Self {
        Memo {
            slots: Mutex::new(HashMap::new()),
        }
    }

    fn get_or_try(&self, key: &K, build: impl FnOnce() -> Result<V>) -> Result<Arc<V>> {
        let slot = {
            let mut slots = self.slots.lock().expect("memo poisoned");
            slots.entry(key.clone()).or_default().clone()
        };
        let mut guard = slot.lock().expect("memo slot poisoned");
        if let Some(v) = guard.as_ref() {
            return Ok(v.clone());
        }
        let v = Arc::new(build()?);
        *guard = Some(v.clone());
        Ok(v)
    }
}

/// Entry point: owns the configuration and caches components and expansion
/// matrices. Cheap to share by reference across threads.
pub struct Engine {
    config: Config,
    components: Memo<(VarietyName, usize, i64), Component>,
    di_components: Memo<(VarietyName, usize), DiComponent>,
    expansions: Memo<(VarietyName, usize), Expansion>,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new(Config::default())
    }
}

impl Engine {
    pub fn new(config: Config) -> Self {
        Engine {
            config,
            components: Memo::new(),
            di_components: Memo::new(),
            expansions: Memo::new(),
        }
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn execution(&self) -> Execution {
        self.config.execution
    }

    pub(crate) fn check_arity(&self, v: VarietyName, n: usize, w: Option<i64>) -> Result<()> {
        if n == 0 {
            return Err(Error::ArityMismatch {
                expected: 1,
                found: 0,
            });
        }
        let undecorated = w == Some(-(n as i64));
        let max = if v == VarietyName::BiCom && undecorated {
            self.config.bicom_plain_max.max(self.config.max_arity)
        } else {
            self.config.max_arity
        };
        if n > max {
            return Err(Error::ArityTooLarge { arity: n, max });
        }
        Ok(())
    }

    /// Reject inputs carrying derivation orders above the configured cap.
    pub fn check_der_cap(&self, e: &Expr) -> Result<()> {
        let cap = self.config.max_der;
        if e.monomials().any(|m| m.max_der() > cap) {
            return Err(TermError::DerivationCap { cap }.into());
        }
        Ok(())
    }

    fn require_ops(v: VarietyName, expected: usize) -> Result<()> {
        if v.num_ops() != expected {
            return Err(Error::OpCount {
                variety: v.to_string(),
                expected,
                found: v.num_ops(),
            });
        }
        Ok(())
    }

    /// Multilinear component of a one-operation variety at arity `n` and
    /// weight `w`.
    pub fn component(&self, v: VarietyName, n: usize, w: i64) -> Result<Arc<Component>> {
        Self::require_ops(v, 1)?;
        self.check_arity(v, n, Some(w))?;
        if n as i64 + w < 0 {
            return Err(TermError::InvalidWeight {
                arity: n,
                weight: w,
            }
            .into());
        }
        self.components
            .get_or_try(&(v, n, w), || self.build_component(v, n, w))
    }

    fn build_component(&self, v: VarietyName, n: usize, w: i64) -> Result<Component> {
        if let Some(c) = self.load_cached(v, n, w) {
            return Ok(c);
        }
        let exec = self.config.execution;
        let c = if w == -(n as i64) {
            let spec = v.spec();
            let prev = if n > spec.min_arity() {
                Some(self.component(v, n - 1, -(n as i64 - 1))?)
            } else {
                None
            };
            build_plain(&spec, n, prev.as_deref(), exec)?
        } else {
            let und = self.component(v, n, -(n as i64))?;
            decorate_component(&und, w, exec)?
        };
        debug!(
            "built {v} component n={n} w={w}: rank {} dim {}",
            c.rank(),
            c.dim()
        );
        self.store_cached(&c);
        Ok(c)
    }

    fn load_cached(&self, v: VarietyName, n: usize, w: i64) -> Option<Component> {
        let dir = self.config.cache_dir.as_ref()?;
        let path = cache_path(dir, v, n, w);
        let file = match load_cache(&path) {
            Ok(Some(f)) => f,
            Ok(None) => return None,
            Err(e) => {
                warn!("ignoring cache file: {e}");
                return None;
            }
        };
        let ambient = Arc::new(enumerate_multilinear(n, w).ok()?);
        match file.into_component(v, ambient, &path) {
            Ok(c) => {
                debug!("loaded {}", path.display());
                Some(c)
            }
            Err(e) => {
                warn!("ignoring cache file: {e}");
                None
            }
        }
    }

    fn store_cached(&self, c: &Component) {
        let Some(dir) = self.config.cache_dir.as_ref() else {
            return;
        };
        let w = c.weight().expect("plain component");
        let path = cache_path(dir, c.variety(), c.arity(), w);
        if let Err(e) = store_cache(&path, &CacheFile::from_component(c)) {
            warn!("could not write cache: {e}");
        }
    }

    /// Multilinear component of a two-operation variety.
    pub fn di_component(&self, v: VarietyName, n: usize) -> Result<Arc<DiComponent>> {
        Self::require_ops(v, 2)?;
        self.check_arity(v, n, None)?;
        self.di_components.get_or_try(&(v, n), || {
            let spec = v.spec();
            let prev = if n > spec.min_arity() {
                Some(self.di_component(v, n - 1)?)
            } else {
                None
            };
            build_di(&spec, n, prev.as_deref(), self.config.execution)
        })
    }

    /// Quotient dimension of `v` at arity `n` without decorations.
    pub fn dim_variety(&self, v: VarietyName, n: usize) -> Result<usize> {
        if v.num_ops() == 2 {
            Ok(self.di_component(v, n)?.dim())
        } else {
            Ok(self.component(v, n, -(n as i64))?.dim())
        }
    }

    pub fn expansion(&self, v: VarietyName, n: usize) -> Result<Arc<Expansion>> {
        Self::require_ops(v, 1)?;
        self.check_arity(v, n, Some(-1))?;
        self.expansions
            .get_or_try(&(v, n), || Expansion::build(self, v, n))
    }
}
