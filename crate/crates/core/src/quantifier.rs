//! Unary width-one generalized quantifiers: definitions, the registry of
//! builtins, interpretation on a structure, and the Tarski-style
//! evaluation used as the oracle for the game semantics.
//!
//! A quantifier is an isomorphism-closed class of structures `(A, B)`
//! with `B ⊆ A`; since such structures are classified up to isomorphism
//! by the pair `(|A|, |B|)`, membership is represented as a predicate on
//! cardinalities.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::ast::{Formula, QuantifierName, VariableId};
use crate::structure::{Assignment, ElementId, Structure};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum QuantifierError {
    UnknownQuantifier(String),
    DuplicateName(String),
    /// A table-backed quantifier has no entry for this domain size.
    TableIncomplete { name: String, domain_size: usize },
    /// Materializing the subset family would enumerate 2^n sets.
    EnumerationCapExceeded { domain_size: usize, cap: usize },
    NotFoQFragment,
    UnassignedVariable(VariableId),
}

impl fmt::Display for QuantifierError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuantifierError::UnknownQuantifier(name) => write!(f, "unknown quantifier `{name}`"),
            QuantifierError::DuplicateName(name) => {
                write!(f, "quantifier `{name}` is already registered")
            }
            QuantifierError::TableIncomplete { name, domain_size } => write!(
                f,
                "quantifier `{name}` has no table entries for domain size {domain_size}"
            ),
            QuantifierError::EnumerationCapExceeded { domain_size, cap } => write!(
                f,
                "domain size {domain_size} exceeds the subset enumeration cap {cap}"
            ),
            QuantifierError::NotFoQFragment => {
                write!(f, "formula is outside the first-order + quantifier fragment")
            }
            QuantifierError::UnassignedVariable(x) => {
                write!(f, "variable `{x}` is unassigned")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for QuantifierError {}

/// How membership of `(|A|, |B|)` pairs is decided.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum MembershipRule {
    /// `|B| >= 1`: the ordinary existential quantifier.
    AtLeastOne,
    /// `|B| = |A|`: the universal quantifier.
    All,
    /// `|B|` even.
    EvenCardinality,
    /// `2|B| > |A|`.
    Majority,
    /// Explicit table `(n, m) -> bool`, complete for every `m <= n` of
    /// each listed `n`. Missing domain sizes are an error at use.
    Table(BTreeMap<(usize, usize), bool>),
}

/// A named quantifier with its membership predicate on cardinalities.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuantifierDef {
    name: String,
    rule: MembershipRule,
}

impl QuantifierDef {
    pub fn new(name: impl Into<String>, rule: MembershipRule) -> Self {
        QuantifierDef {
            name: name.into(),
            rule,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Does a subset of size `subset_size` in a domain of size
    /// `domain_size` belong to the quantifier?
    pub fn accepts(&self, domain_size: usize, subset_size: usize) -> Result<bool, QuantifierError> {
        debug_assert!(subset_size <= domain_size);
        match &self.rule {
            MembershipRule::AtLeastOne => Ok(subset_size >= 1),
            MembershipRule::All => Ok(subset_size == domain_size),
            MembershipRule::EvenCardinality => Ok(subset_size % 2 == 0),
            MembershipRule::Majority => Ok(2 * subset_size > domain_size),
            MembershipRule::Table(table) => {
                table
                    .get(&(domain_size, subset_size))
                    .copied()
                    .ok_or(QuantifierError::TableIncomplete {
                        name: self.name.clone(),
                        domain_size,
                    })
            }
        }
    }
}

/// Immutable-after-load name-to-definition map.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct QuantifierRegistry {
    defs: BTreeMap<String, QuantifierDef>,
}

impl QuantifierRegistry {
    pub fn empty() -> Self {
        QuantifierRegistry::default()
    }

    pub fn get(&self, name: &str) -> Option<&QuantifierDef> {
        self.defs.get(name)
    }

    pub fn resolve(&self, name: &QuantifierName) -> Result<&QuantifierDef, QuantifierError> {
        self.get(name.as_str())
            .ok_or_else(|| QuantifierError::UnknownQuantifier(name.as_str().into()))
    }

    pub fn insert(&mut self, def: QuantifierDef) -> Result<(), QuantifierError> {
        if self.defs.contains_key(&def.name) {
            return Err(QuantifierError::DuplicateName(def.name));
        }
        self.defs.insert(def.name.clone(), def);
        Ok(())
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.defs.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.defs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }
}

/// The four builtins: `exists`, `forall`, `even`, `majority`.
pub fn builtin_quantifiers() -> QuantifierRegistry {
    let mut registry = QuantifierRegistry::empty();
    for def in [
        QuantifierDef::new("exists", MembershipRule::AtLeastOne),
        QuantifierDef::new("forall", MembershipRule::All),
        QuantifierDef::new("even", MembershipRule::EvenCardinality),
        QuantifierDef::new("majority", MembershipRule::Majority),
    ] {
        registry.insert(def).expect("builtin names are distinct");
    }
    registry
}

/// Materialize `Q^A`, the family of admissible witness sets: every
/// `S ⊆ A` whose cardinality pair the quantifier accepts, in subset-mask
/// enumeration order over the sorted domain. Errors when the domain
/// exceeds `cap`.
pub fn q_interpretation(
    quantifier: &QuantifierDef,
    structure: &Structure,
    cap: usize,
) -> Result<Vec<BTreeSet<ElementId>>, QuantifierError> {
    let elements: Vec<ElementId> = structure.domain().collect();
    let n = elements.len();
    if n > cap {
        return Err(QuantifierError::EnumerationCapExceeded {
            domain_size: n,
            cap,
        });
    }
    let mut family = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let size = mask.count_ones() as usize;
        if quantifier.accepts(n, size)? {
            let set = elements
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, e)| *e)
                .collect();
            family.push(set);
        }
    }
    Ok(family)
}

/// Tarski-style truth for the first-order fragment extended with
/// generalized quantifiers: `Q̂x φ` holds iff the set of witnesses of φ
/// belongs to `Q^A`. Serves as the independent oracle for the game
/// semantics.
pub fn tarski_q_eval(
    structure: &Structure,
    assignment: &Assignment,
    formula: &Formula,
    registry: &QuantifierRegistry,
) -> Result<bool, QuantifierError> {
    match formula {
        Formula::Rel(symbol, args) => {
            let tuple = resolve_tuple(assignment, args)?;
            Ok(structure.has_tuple(symbol, &tuple))
        }
        Formula::RelVar(rv, args) => {
            let tuple = resolve_tuple(assignment, args)?;
            Ok(assignment
                .get_relational(rv)
                .map(|set| set.contains(&tuple))
                .unwrap_or(false))
        }
        Formula::Eq(x, y) => {
            let a = assignment
                .get(x)
                .ok_or_else(|| QuantifierError::UnassignedVariable(x.clone()))?;
            let b = assignment
                .get(y)
                .ok_or_else(|| QuantifierError::UnassignedVariable(y.clone()))?;
            Ok(a == b)
        }
        Formula::Not(inner) => Ok(!tarski_q_eval(structure, assignment, inner, registry)?),
        Formula::And(l, r) => Ok(tarski_q_eval(structure, assignment, l, registry)?
            && tarski_q_eval(structure, assignment, r, registry)?),
        Formula::Exists(x, inner) => {
            for a in structure.domain() {
                let g = assignment.bind(x.clone(), a);
                if tarski_q_eval(structure, &g, inner, registry)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Quant(name, x, inner) => {
            let def = registry.resolve(name)?;
            let mut witnesses = 0usize;
            for a in structure.domain() {
                let g = assignment.bind(x.clone(), a);
                if tarski_q_eval(structure, &g, inner, registry)? {
                    witnesses += 1;
                }
            }
            def.accepts(structure.domain_size(), witnesses)
        }
        _ => Err(QuantifierError::NotFoQFragment),
    }
}

fn resolve_tuple(
    assignment: &Assignment,
    args: &[VariableId],
) -> Result<Vec<ElementId>, QuantifierError> {
    args.iter()
        .map(|x| {
            assignment
                .get(x)
                .ok_or_else(|| QuantifierError::UnassignedVariable(x.clone()))
        })
        .collect()
}

/// Check that every quantifier named in the formula is registered.
pub fn validate_quantifier_names(
    formula: &Formula,
    registry: &QuantifierRegistry,
) -> Result<(), QuantifierError> {
    for (_, node) in crate::ast::subformulae(formula) {
        if let Formula::Quant(name, _, _) = node {
            registry.resolve(name)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::build::*;
    use crate::ast::RelationSymbol;

    fn quant(name: &str, x: &str, body: Formula) -> Formula {
        Formula::Quant(
            QuantifierName::new(name),
            VariableId::new(x),
            alloc::boxed::Box::new(body),
        )
    }

    #[test]
    fn builtins_are_registered() {
        let registry = builtin_quantifiers();
        assert_eq!(registry.len(), 4);
        for name in ["exists", "forall", "even", "majority"] {
            assert!(registry.get(name).is_some());
        }
    }

    #[test]
    fn duplicate_name_is_rejected() {
        let mut registry = builtin_quantifiers();
        assert!(matches!(
            registry.insert(QuantifierDef::new("even", MembershipRule::All)),
            Err(QuantifierError::DuplicateName(_))
        ));
    }

    #[test]
    fn majority_threshold() {
        let registry = builtin_quantifiers();
        let m = registry.get("majority").unwrap();
        assert!(!m.accepts(4, 2).unwrap());
        assert!(m.accepts(4, 3).unwrap());
    }

    #[test]
    fn even_interpretation_on_two_elements() {
        let registry = builtin_quantifiers();
        let s = Structure::new(2).unwrap();
        let family = q_interpretation(registry.get("even").unwrap(), &s, 12).unwrap();
        let expected: Vec<BTreeSet<ElementId>> = alloc::vec![
            BTreeSet::new(),
            [ElementId(0), ElementId(1)].into_iter().collect(),
        ];
        assert_eq!(family, expected);
    }

    #[test]
    fn exists_interpretation_on_singleton() {
        let registry = builtin_quantifiers();
        let s = Structure::new(1).unwrap();
        let family = q_interpretation(registry.get("exists").unwrap(), &s, 12).unwrap();
        assert_eq!(family.len(), 1);
        assert_eq!(family[0], [ElementId(0)].into_iter().collect());
    }

    #[test]
    fn empty_membership_yields_empty_family() {
        let never = QuantifierDef::new("never", MembershipRule::Table(BTreeMap::new()));
        let s = Structure::new(1).unwrap();
        // An all-absent table errors; an explicit all-false table gives
        // the empty family.
        assert!(q_interpretation(&never, &s, 12).is_err());
        let mut table = BTreeMap::new();
        table.insert((1, 0), false);
        table.insert((1, 1), false);
        let never = QuantifierDef::new("never", MembershipRule::Table(table));
        assert!(q_interpretation(&never, &s, 12).unwrap().is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        let registry = builtin_quantifiers();
        let s = Structure::new(5).unwrap();
        assert!(matches!(
            q_interpretation(registry.get("even").unwrap(), &s, 4),
            Err(QuantifierError::EnumerationCapExceeded { domain_size: 5, cap: 4 })
        ));
    }

    #[test]
    fn tarski_even_counts_witnesses() {
        let registry = builtin_quantifiers();
        let two = Structure::new(2).unwrap();
        let three = Structure::new(3).unwrap();
        let f = quant("even", "x", eq("x", "x"));
        assert!(tarski_q_eval(&two, &Assignment::empty(), &f, &registry).unwrap());
        assert!(!tarski_q_eval(&three, &Assignment::empty(), &f, &registry).unwrap());
    }

    #[test]
    fn tarski_exists_on_empty_predicate_is_false() {
        let registry = builtin_quantifiers();
        let mut s = Structure::new(2).unwrap();
        s.declare_symbol(RelationSymbol::new("P", 1));
        let f = quant("exists", "x", rel("P", &["x"]));
        assert!(!tarski_q_eval(&s, &Assignment::empty(), &f, &registry).unwrap());
    }

    #[test]
    fn unknown_quantifier_name_is_detected() {
        let registry = builtin_quantifiers();
        let f = quant("mystery", "x", eq("x", "x"));
        assert!(matches!(
            validate_quantifier_names(&f, &registry),
            Err(QuantifierError::UnknownQuantifier(_))
        ));
    }
}
