use std::collections::BTreeMap;
use std::sync::Arc;

use super::{builtin, ProblemDefinition, BUILTIN_NAMES};
use crate::error::{Error, Result};
use crate::types::Evaluation;

type Factory = dyn Fn(usize) -> Result<ProblemDefinition> + Send + Sync;

/// Problems addressable by name. A name resolves to an instance for a
/// requested search-space dimension.
#[derive(Clone)]
pub struct Registry {
    entries: BTreeMap<String, Arc<Factory>>,
}

impl Default for Registry {
    fn default() -> Self {
        Self::with_builtins()
    }
}

impl Registry {
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    /// A registry holding the three built-in problems.
    pub fn with_builtins() -> Self {
        let mut reg = Self::empty();
        for name in BUILTIN_NAMES {
            reg.register_scalable(name, move |dim| builtin(name, dim))
                .expect("built-in names are distinct");
        }
        reg
    }

    /// Registers a fixed-dimension problem definition under its own name.
    pub fn register(&mut self, definition: ProblemDefinition) -> Result<String> {
        definition.meta().validate()?;
        let name = definition.name().to_string();
        let dim = definition.meta().dim;
        self.insert(
            name.clone(),
            Arc::new(move |d| {
                if d == dim {
                    Ok(definition.clone())
                } else {
                    Err(Error::Config(format!(
                        "{} is defined for dimension {dim} only, requested {d}",
                        definition.name()
                    )))
                }
            }),
        )?;
        Ok(name)
    }

    /// Registers a problem family that can be instantiated in any dimension.
    pub fn register_scalable(
        &mut self,
        name: &str,
        factory: impl Fn(usize) -> Result<ProblemDefinition> + Send + Sync + 'static,
    ) -> Result<String> {
        self.insert(name.to_string(), Arc::new(factory))?;
        Ok(name.to_string())
    }

    fn insert(&mut self, name: String, factory: Arc<Factory>) -> Result<()> {
        if self.entries.contains_key(&name) {
            return Err(Error::Conflict(name));
        }
        self.entries.insert(name, factory);
        Ok(())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    /// Registered names in lexicographic order.
    pub fn names(&self) -> Vec<String> {
        self.entries.keys().cloned().collect()
    }

    pub fn get(&self, name: &str, dim: usize) -> Result<ProblemDefinition> {
        let factory = self
            .entries
            .get(name)
            .ok_or_else(|| Error::UnknownProblem(name.to_string()))?;
        let def = factory(dim)?;
        if def.name() != name {
            return Err(Error::Config(format!(
                "factory for {name} produced a problem named {}",
                def.name()
            )));
        }
        Ok(def)
    }

    /// Evaluates problem `name` at `x` (dimension taken from `x`).
    pub fn evaluate(&self, name: &str, x: &[f64]) -> Result<Evaluation> {
        self.get(name, x.len())?.evaluate(x, 1)
    }
}
