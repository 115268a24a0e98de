use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Resource limits shared by every computation in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Largest group produced by closing a set of generators.
    pub max_group_order: usize,
    /// Largest number of normalized tuples in one cochain degree.
    pub max_tuples: usize,
    /// Largest matrix group closure.
    pub max_closure_order: usize,
    /// Largest group accepted by the isomorphism test.
    pub max_iso_order: usize,
    /// Largest extension group built by the representation group search.
    pub max_extension_order: usize,
    /// Largest coefficient group whose automorphisms are enumerated.
    pub max_module_order: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_group_order: 20_000,
            max_tuples: 40_000,
            max_closure_order: 10_000,
            max_iso_order: 128,
            max_extension_order: 32,
            max_module_order: 64,
        }
    }
}

impl Budget {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("max_group_order", self.max_group_order),
            ("max_tuples", self.max_tuples),
            ("max_closure_order", self.max_closure_order),
            ("max_iso_order", self.max_iso_order),
            ("max_extension_order", self.max_extension_order),
            ("max_module_order", self.max_module_order),
        ];
        for (name, v) in fields {
            if v == 0 {
                return Err(Error::input(format!("budget {name} must be positive")));
            }
        }
        Ok(())
    }
}
