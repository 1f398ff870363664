use std::collections::BTreeMap;

use super::{GlcsModel, Player, StepMode};
use crate::mu::RegionAlgebra;
use crate::region::{Config, Region};

/// Built-in operators of the configuration algebra with their arity.
/// Unsuffixed step operators are lossy, the `p` variants perfect.
pub const CONFIG_OPERATORS: &[(&str, usize)] = &[
    ("pre", 1),
    ("prep", 1),
    ("post", 1),
    ("postp", 1),
    ("wpre", 1),
    ("wprep", 1),
    ("confA", 0),
    ("confB", 0),
];

/// Regions of one model as a region algebra. Named regions of the model and
/// any extra constants are nullary operators.
#[derive(Debug, Clone)]
pub struct ConfigAlgebra<'m> {
    model: &'m GlcsModel,
    extra: BTreeMap<String, Region>,
}

impl<'m> ConfigAlgebra<'m> {
    pub fn new(model: &'m GlcsModel) -> ConfigAlgebra<'m> {
        ConfigAlgebra {
            model,
            extra: BTreeMap::new(),
        }
    }

    /// Adds or replaces a named constant.
    pub fn with_constant(mut self, name: impl Into<String>, r: Region) -> ConfigAlgebra<'m> {
        self.extra.insert(name.into(), r);
        self
    }

    pub fn model(&self) -> &'m GlcsModel {
        self.model
    }

    fn constant(&self, name: &str) -> Option<&Region> {
        self.extra.get(name).or_else(|| self.model.region(name))
    }
}

impl RegionAlgebra for ConfigAlgebra<'_> {
    type Value = Region;
    type Element = Config;

    fn empty(&self) -> Region {
        Region::empty(self.model.signature())
    }

    fn full(&self) -> Region {
        Region::full(self.model.signature())
    }

    fn union(&self, a: &Region, b: &Region) -> Region {
        a.union(b).expect("values share the model signature")
    }

    fn intersection(&self, a: &Region, b: &Region) -> Region {
        a.intersection(b).expect("values share the model signature")
    }

    fn complement(&self, a: &Region) -> Region {
        a.complement()
    }

    fn up_closure(&self, a: &Region) -> Region {
        a.up_closure()
    }

    fn down_closure(&self, a: &Region) -> Region {
        a.down_closure()
    }

    fn up_kernel(&self, a: &Region) -> Region {
        a.up_kernel()
    }

    fn down_kernel(&self, a: &Region) -> Region {
        a.down_kernel()
    }

    fn equal(&self, a: &Region, b: &Region) -> bool {
        a.equals(b).expect("values share the model signature")
    }

    fn subset(&self, a: &Region, b: &Region) -> bool {
        a.is_subset(b).expect("values share the model signature")
    }

    fn member(&self, c: &Config, a: &Region) -> bool {
        a.contains(c).unwrap_or(false)
    }

    fn size(&self, a: &Region) -> usize {
        a.size()
    }

    fn arity(&self, name: &str) -> Option<usize> {
        if self.constant(name).is_some() {
            return Some(0);
        }
        CONFIG_OPERATORS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|&(_, k)| k)
    }

    fn apply(&self, name: &str, args: &[Region]) -> Result<Region, String> {
        if let Some(r) = self.constant(name) {
            return Ok(r.clone());
        }
        let m = self.model;
        let r = match (name, args) {
            ("pre", [a]) => m.pre(a, StepMode::Lossy),
            ("prep", [a]) => m.pre(a, StepMode::Perfect),
            ("post", [a]) => m.post(a, StepMode::Lossy),
            ("postp", [a]) => m.post(a, StepMode::Perfect),
            ("wpre", [a]) => m.wpre(a, StepMode::Lossy),
            ("wprep", [a]) => m.wpre(a, StepMode::Perfect),
            ("confA" | "confB", []) => {
                if !m.is_game() {
                    return Err(format!("{name} needs a model with location owners"));
                }
                let p = if name == "confA" { Player::A } else { Player::B };
                Ok(m.conf(p))
            }
            _ => return Err(format!("unknown operator {name}/{}", args.len())),
        };
        r.map_err(|e| e.to_string())
    }
}
