use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::coeff::Field;
use super::order::MonomialOrder;
use crate::error::{Error, Result};

/// A polynomial ring `k[v_1, ..., v_n]` with a fixed monomial order.
#[derive(Clone)]
pub struct Ring {
    field: Field,
    vars: Vec<String>,
    order: MonomialOrder,
    index: HashMap<String, usize>,
}

pub type RingRef = Arc<Ring>;

pub fn valid_var_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Ring {
    pub fn new<S: AsRef<str>>(field: Field, vars: &[S], order: MonomialOrder) -> Result<RingRef> {
        let vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, v) in vars.iter().enumerate() {
            if !valid_var_name(v) {
                return Err(Error::InvalidRing(format!("invalid variable name `{v}`")));
            }
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::InvalidRing(format!("duplicate variable `{v}`")));
            }
        }
        if let MonomialOrder::Block(sizes) = &order {
            if sizes.iter().sum::<usize>() != vars.len() {
                return Err(Error::InvalidRing("block sizes do not cover the variables".into()));
            }
        }
        Ok(Arc::new(Ring { field, vars, order, index }))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_name(&self, i: usize) -> &str {
        &self.vars[i]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Same variables, different order.
    pub fn with_order(&self, order: MonomialOrder) -> Result<RingRef> {
        Ring::new(self.field, &self.vars, order)
    }

    /// Same variables and order, different field.
    pub fn with_field(&self, field: Field) -> RingRef {
        let mut r = self.clone();
        r.field = field;
        Arc::new(r)
    }

    /// Appends `extra` variables; degrevlex on the result unless `order` is given.
    pub fn extend<S: AsRef<str>>(&self, extra: &[S], order: Option<MonomialOrder>) -> Result<RingRef> {
        let mut vars = self.vars.clone();
        vars.extend(extra.iter().map(|s| s.as_ref().to_string()));
        Ring::new(self.field, &vars, order.unwrap_or_default())
    }

    /// Prepends `extra` variables.
    pub fn prepend<S: AsRef<str>>(&self, extra: &[S], order: MonomialOrder) -> Result<RingRef> {
        let mut vars: Vec<String> = extra.iter().map(|s| s.as_ref().to_string()).collect();
        vars.extend(self.vars.iter().cloned());
        Ring::new(self.field, &vars, order)
    }

    /// A name based on `base` that is not yet a variable of this ring nor in `taken`.
    pub fn fresh_name(&self, base: &str, taken: &[String]) -> String {
        let mut name = base.to_string();
        while self.index.contains_key(&name) || taken.contains(&name) {
            name.push('_');
        }
        name
    }
}

impl PartialEq for Ring {
    fn eq(&self, o: &Ring) -> bool {
        self.field == o.field && self.vars == o.vars && self.order == o.order
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.field {
            Field::Rational => "QQ".to_string(),
            Field::Prime(p) => format!("GF({p})"),
        };
        write!(f, "{}[{}] ({})", k, self.vars.join(","), self.order.name())
    }
}

pub fn same_ring(a: &RingRef, b: &RingRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}
