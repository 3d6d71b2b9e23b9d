//! Abstract syntax: formulas, free variables, subformula addressing and
//! well-formedness (arity checks plus the non-standard-jump restriction).

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// An individual variable, named by a nonempty identifier.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VariableId(String);

impl VariableId {
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        assert!(!name.is_empty(), "variable name must be nonempty");
        VariableId(name)
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VariableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A relation symbol with a fixed positive arity.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RelationSymbol {
    pub name: String,
    pub arity: usize,
}

impl RelationSymbol {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        assert!(arity >= 1, "relation arity must be positive");
        RelationSymbol {
            name: name.into(),
            arity,
        }
    }
}

impl fmt::Display for RelationSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// A relation variable. Lives in a namespace disjoint from relation
/// symbols; the concrete syntax prefixes these with `$`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RelationVariable {
    pub name: String,
    pub arity: usize,
}

impl RelationVariable {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        assert!(arity >= 1, "relation variable arity must be positive");
        RelationVariable {
            name: name.into(),
            arity,
        }
    }
}

impl fmt::Display for RelationVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "${}/{}", self.name, self.arity)
    }
}

/// A loop label: any natural number.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LoopLabel(pub u64);

impl fmt::Display for LoopLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Name of a generalized quantifier, resolved against a registry at
/// evaluation time.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct QuantifierName(String);

impl QuantifierName {
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        assert!(!name.is_empty(), "quantifier name must be nonempty");
        QuantifierName(name)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for QuantifierName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Core formulas. One constructor per formation rule, plus the
/// generalized-quantifier extension `Quant`.
///
/// Derived connectives (disjunction, implication, the universal
/// quantifier, the constants true/false) never appear here; parse-level
/// trees use [`ExtendedFormula`] and are lowered through [`desugar`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    /// `R(x1, .., xk)` for a relation symbol `R`.
    Rel(RelationSymbol, Vec<VariableId>),
    /// `X(x1, .., xk)` for a relation variable `X`.
    RelVar(RelationVariable, Vec<VariableId>),
    /// `x = y`.
    Eq(VariableId, VariableId),
    /// The loop atom `k`: jump back to some `k`-labeled subformula.
    LoopAtom(LoopLabel),
    /// Negation.
    Not(Box<Formula>),
    /// Conjunction.
    And(Box<Formula>, Box<Formula>),
    /// First-order existential quantifier.
    Exists(VariableId, Box<Formula>),
    /// `Ix φ`: insert a fresh isolated point and bind `x` to it.
    NewPoint(VariableId, Box<Formula>),
    /// `I_{R x1..xk} φ`: insert a chosen tuple into `R`, binding the
    /// variables to its components.
    InsertRel(RelationSymbol, Vec<VariableId>, Box<Formula>),
    /// `I_{X x1..xk} φ`: like `InsertRel` but updates the assignment's
    /// value for the relation variable `X`.
    InsertRelVar(RelationVariable, Vec<VariableId>, Box<Formula>),
    /// `D_{R x1..xk} φ`: delete a chosen tuple from `R`.
    DeleteRel(RelationSymbol, Vec<VariableId>, Box<Formula>),
    /// `D_{X x1..xk} φ`: delete a chosen tuple from the value of `X`.
    DeleteRelVar(RelationVariable, Vec<VariableId>, Box<Formula>),
    /// The labeled formula `kφ`, a jump target for loop atoms `k`.
    Labeled(LoopLabel, Box<Formula>),
    /// Generalized quantifier `Q̂x φ` (unary, width one).
    Quant(QuantifierName, VariableId, Box<Formula>),
}

impl Formula {
    /// Children in positional order (0 or 1 for unary nodes, 0/1 for
    /// conjunctions).
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Rel(..) | Formula::RelVar(..) | Formula::Eq(..) | Formula::LoopAtom(..) => {
                Vec::new()
            }
            Formula::And(l, r) => alloc::vec![l.as_ref(), r.as_ref()],
            Formula::Not(c)
            | Formula::Exists(_, c)
            | Formula::NewPoint(_, c)
            | Formula::InsertRel(_, _, c)
            | Formula::InsertRelVar(_, _, c)
            | Formula::DeleteRel(_, _, c)
            | Formula::DeleteRelVar(_, _, c)
            | Formula::Labeled(_, c)
            | Formula::Quant(_, _, c) => alloc::vec![c.as_ref()],
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(
            self,
            Formula::Rel(..) | Formula::RelVar(..) | Formula::Eq(..) | Formula::LoopAtom(..)
        )
    }

    /// Resolve a path to the node it addresses.
    pub fn node_at(&self, path: &FormulaPath) -> Option<&Formula> {
        let mut node = self;
        for &i in path.indices() {
            node = *node.children().get(i as usize)?;
        }
        Some(node)
    }

    /// Number of AST nodes. Negation and labeled wrappers count.
    pub fn node_count(&self) -> usize {
        1 + self.children().iter().map(|c| c.node_count()).sum::<usize>()
    }

    /// Height of the syntax tree (an atom has depth 1).
    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// True on the fragment handled by Tarski recursion: `Rel`, `RelVar`,
    /// `Eq`, `Not`, `And`, `Exists`. Loop atoms and all model-mutating
    /// operators fall outside it.
    pub fn is_fo(&self) -> bool {
        match self {
            Formula::Rel(..) | Formula::RelVar(..) | Formula::Eq(..) => true,
            Formula::Not(c) | Formula::Exists(_, c) => c.is_fo(),
            Formula::And(l, r) => l.is_fo() && r.is_fo(),
            _ => false,
        }
    }
}

/// Address of a subformula instance: the sequence of child indices from
/// the root. Two occurrences of the syntactically same subformula always
/// have distinct paths.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct FormulaPath(Vec<u8>);

impl FormulaPath {
    pub fn root() -> Self {
        FormulaPath(Vec::new())
    }

    pub fn from_indices(indices: impl Into<Vec<u8>>) -> Self {
        FormulaPath(indices.into())
    }

    pub fn child(&self, index: u8) -> Self {
        let mut v = self.0.clone();
        v.push(index);
        FormulaPath(v)
    }

    pub fn indices(&self) -> &[u8] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    /// True iff `self` addresses a node inside the subtree rooted at
    /// `other` (or is `other` itself).
    pub fn is_within(&self, other: &FormulaPath) -> bool {
        self.0.len() >= other.0.len() && self.0[..other.0.len()] == other.0[..]
    }
}

impl fmt::Display for FormulaPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, ix) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{ix}")?;
        }
        f.write_str("]")
    }
}

/// A free variable is either an individual variable or a relation
/// variable; relation symbols are never free.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum FreeVar {
    Individual(VariableId),
    Relational(RelationVariable),
}

impl fmt::Display for FreeVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreeVar::Individual(x) => write!(f, "{x}"),
            FreeVar::Relational(x) => write!(f, "${}", x.name),
        }
    }
}

/// The free-variable set, computed clause by clause over the
/// constructors. The tuple operators bind their variables, and the
/// relation-variable forms additionally bind the relation variable
/// itself; `Q̂x` binds `x`.
pub fn free_variables(formula: &Formula) -> BTreeSet<FreeVar> {
    use Formula::*;
    match formula {
        Rel(_, args) => args
            .iter()
            .map(|x| FreeVar::Individual(x.clone()))
            .collect(),
        RelVar(rv, args) => {
            let mut set: BTreeSet<FreeVar> = args
                .iter()
                .map(|x| FreeVar::Individual(x.clone()))
                .collect();
            set.insert(FreeVar::Relational(rv.clone()));
            set
        }
        Eq(x, y) => [
            FreeVar::Individual(x.clone()),
            FreeVar::Individual(y.clone()),
        ]
        .into_iter()
        .collect(),
        LoopAtom(_) => BTreeSet::new(),
        Not(inner) | Labeled(_, inner) => free_variables(inner),
        And(l, r) => {
            let mut set = free_variables(l);
            set.extend(free_variables(r));
            set
        }
        Exists(x, inner) | NewPoint(x, inner) | Quant(_, x, inner) => {
            let mut set = free_variables(inner);
            set.remove(&FreeVar::Individual(x.clone()));
            set
        }
        InsertRel(_, args, inner) | DeleteRel(_, args, inner) => {
            let mut set = free_variables(inner);
            for x in args {
                set.remove(&FreeVar::Individual(x.clone()));
            }
            set
        }
        InsertRelVar(rv, args, inner) | DeleteRelVar(rv, args, inner) => {
            let mut set = free_variables(inner);
            set.remove(&FreeVar::Relational(rv.clone()));
            for x in args {
                set.remove(&FreeVar::Individual(x.clone()));
            }
            set
        }
    }
}

pub fn is_sentence(formula: &Formula) -> bool {
    free_variables(formula).is_empty()
}

/// Preorder enumeration of all subformula instances with their paths.
/// Every instance of a syntactically repeated subformula appears once
/// under its own path.
pub fn subformulae(formula: &Formula) -> Vec<(FormulaPath, &Formula)> {
    let mut out = Vec::new();
    walk(formula, FormulaPath::root(), &mut out);
    return out;

    fn walk<'a>(node: &'a Formula, path: FormulaPath, out: &mut Vec<(FormulaPath, &'a Formula)>) {
        out.push((path.clone(), node));
        for (i, child) in node.children().into_iter().enumerate() {
            walk(child, path.child(i as u8), out);
        }
    }
}

/// Paths of every `k`-labeled node, per label.
pub fn labeled_nodes(formula: &Formula) -> BTreeMap<LoopLabel, Vec<FormulaPath>> {
    let mut map: BTreeMap<LoopLabel, Vec<FormulaPath>> = BTreeMap::new();
    for (path, node) in subformulae(formula) {
        if let Formula::Labeled(label, _) = node {
            map.entry(*label).or_default().push(path);
        }
    }
    map
}

/// A formula has a non-standard jump when some loop atom `k` and some
/// labeled subformula `kψ` exist such that the atom occurrence does not
/// lie inside that `kψ` instance. Such formulas are rejected: a jump
/// could then land on a subformula whose variables were never assigned.
pub fn has_non_standard_jump(formula: &Formula) -> bool {
    let labeled = labeled_nodes(formula);
    for (atom_path, node) in subformulae(formula) {
        if let Formula::LoopAtom(label) = node {
            if let Some(targets) = labeled.get(label) {
                if targets.iter().any(|t| !atom_path.is_within(t)) {
                    return true;
                }
            }
        }
    }
    false
}

/// What `validate` can reject, with the offending path.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ValidationError {
    UndeclaredSymbol {
        path: FormulaPath,
        name: String,
    },
    ArityMismatch {
        path: FormulaPath,
        symbol: String,
        declared: usize,
        used: usize,
    },
    RelationVariableArityConflict {
        path: FormulaPath,
        name: String,
        first: usize,
        conflicting: usize,
    },
    NonStandardJump {
        atom_path: FormulaPath,
        label: LoopLabel,
        escaped_target: FormulaPath,
    },
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationError::UndeclaredSymbol { path, name } => {
                write!(f, "undeclared relation symbol `{name}` at {path}")
            }
            ValidationError::ArityMismatch {
                path,
                symbol,
                declared,
                used,
            } => write!(
                f,
                "arity mismatch at {path}: `{symbol}` declared with arity {declared}, used with {used}"
            ),
            ValidationError::RelationVariableArityConflict {
                path,
                name,
                first,
                conflicting,
            } => write!(
                f,
                "relation variable `${name}` used with arity {conflicting} at {path} but previously with {first}"
            ),
            ValidationError::NonStandardJump {
                atom_path,
                label,
                escaped_target,
            } => write!(
                f,
                "non-standard jump: loop atom #{label} at {atom_path} lies outside the #{label}-labeled subformula at {escaped_target}"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ValidationError {}

/// A declared finite vocabulary: relation names with their arities.
/// Names are unique; the same name cannot carry two arities.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Vocabulary {
    by_name: BTreeMap<String, usize>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Vocabulary::default()
    }

    pub fn declare(&mut self, name: impl Into<String>, arity: usize) -> Result<(), String> {
        assert!(arity >= 1);
        let name = name.into();
        match self.by_name.get(&name) {
            Some(&a) if a != arity => Err(alloc::format!(
                "symbol `{name}` already declared with arity {a}"
            )),
            _ => {
                self.by_name.insert(name, arity);
                Ok(())
            }
        }
    }

    pub fn arity_of(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn symbol(&self, name: &str) -> Option<RelationSymbol> {
        self.arity_of(name).map(|a| RelationSymbol::new(name, a))
    }

    pub fn symbols(&self) -> impl Iterator<Item = RelationSymbol> + '_ {
        self.by_name
            .iter()
            .map(|(n, &a)| RelationSymbol::new(n.clone(), a))
    }

    pub fn len(&self) -> usize {
        self.by_name.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_name.is_empty()
    }
}

impl FromIterator<RelationSymbol> for Vocabulary {
    fn from_iter<T: IntoIterator<Item = RelationSymbol>>(iter: T) -> Self {
        let mut v = Vocabulary::new();
        for s in iter {
            v.declare(s.name, s.arity).expect("conflicting arity");
        }
        v
    }
}

/// Membership in the restricted language over `vocabulary`: every symbol
/// declared with matching arity, relation variables arity-consistent, and
/// no non-standard jumps.
pub fn validate(formula: &Formula, vocabulary: &Vocabulary) -> Result<(), ValidationError> {
    let mut relvar_arities: BTreeMap<&str, (usize, &FormulaPath)> = BTreeMap::new();
    let nodes = subformulae(formula);
    for (path, node) in &nodes {
        let (sym, relvar, args): (Option<&RelationSymbol>, Option<&RelationVariable>, Option<&[VariableId]>) =
            match node {
                Formula::Rel(s, a) => (Some(s), None, Some(a)),
                Formula::InsertRel(s, a, _) | Formula::DeleteRel(s, a, _) => {
                    (Some(s), None, Some(a))
                }
                Formula::RelVar(x, a) => (None, Some(x), Some(a)),
                Formula::InsertRelVar(x, a, _) | Formula::DeleteRelVar(x, a, _) => {
                    (None, Some(x), Some(a))
                }
                _ => (None, None, None),
            };
        if let Some(sym) = sym {
            match vocabulary.arity_of(&sym.name) {
                None => {
                    return Err(ValidationError::UndeclaredSymbol {
                        path: path.clone(),
                        name: sym.name.clone(),
                    })
                }
                Some(declared) if declared != sym.arity => {
                    return Err(ValidationError::ArityMismatch {
                        path: path.clone(),
                        symbol: sym.name.clone(),
                        declared,
                        used: sym.arity,
                    })
                }
                Some(declared) => {
                    let used = args.map(|a| a.len()).unwrap_or(declared);
                    if used != declared {
                        return Err(ValidationError::ArityMismatch {
                            path: path.clone(),
                            symbol: sym.name.clone(),
                            declared,
                            used,
                        });
                    }
                }
            }
        }
        if let Some(rv) = relvar {
            let used = args.map(|a| a.len()).unwrap_or(rv.arity);
            if used != rv.arity {
                return Err(ValidationError::ArityMismatch {
                    path: path.clone(),
                    symbol: alloc::format!("${}", rv.name),
                    declared: rv.arity,
                    used,
                });
            }
            match relvar_arities.get(rv.name.as_str()) {
                Some(&(first, _)) if first != rv.arity => {
                    return Err(ValidationError::RelationVariableArityConflict {
                        path: path.clone(),
                        name: rv.name.clone(),
                        first,
                        conflicting: rv.arity,
                    })
                }
                Some(_) => {}
                None => {
                    relvar_arities.insert(&rv.name, (rv.arity, path));
                }
            }
        }
    }

    // Report the first escaping loop atom with a concrete escaped target.
    let labeled = labeled_nodes(formula);
    for (atom_path, node) in &nodes {
        if let Formula::LoopAtom(label) = node {
            if let Some(targets) = labeled.get(label) {
                if let Some(t) = targets.iter().find(|t| !atom_path.is_within(t)) {
                    return Err(ValidationError::NonStandardJump {
                        atom_path: atom_path.clone(),
                        label: *label,
                        escaped_target: t.clone(),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Surface-level formulas: the core constructors plus the derived
/// connectives. These never reach the game; [`desugar`] removes them.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ExtendedFormula {
    Rel(RelationSymbol, Vec<VariableId>),
    RelVar(RelationVariable, Vec<VariableId>),
    Eq(VariableId, VariableId),
    LoopAtom(LoopLabel),
    Not(Box<ExtendedFormula>),
    And(Box<ExtendedFormula>, Box<ExtendedFormula>),
    Or(Box<ExtendedFormula>, Box<ExtendedFormula>),
    Implies(Box<ExtendedFormula>, Box<ExtendedFormula>),
    Exists(VariableId, Box<ExtendedFormula>),
    Forall(VariableId, Box<ExtendedFormula>),
    NewPoint(VariableId, Box<ExtendedFormula>),
    InsertRel(RelationSymbol, Vec<VariableId>, Box<ExtendedFormula>),
    InsertRelVar(RelationVariable, Vec<VariableId>, Box<ExtendedFormula>),
    DeleteRel(RelationSymbol, Vec<VariableId>, Box<ExtendedFormula>),
    DeleteRelVar(RelationVariable, Vec<VariableId>, Box<ExtendedFormula>),
    Labeled(LoopLabel, Box<ExtendedFormula>),
    Quant(QuantifierName, VariableId, Box<ExtendedFormula>),
    Top,
    Bottom,
}

/// The variable used when expanding `T`/`F`; the expansions are closed,
/// so the choice never captures anything.
const TAUTOLOGY_VAR: &str = "v";

fn top_formula() -> Formula {
    // T expands to ~exists v ~(v = v).
    let v = VariableId::new(TAUTOLOGY_VAR.to_owned());
    Formula::Not(Box::new(Formula::Exists(
        v.clone(),
        Box::new(Formula::Not(Box::new(Formula::Eq(v.clone(), v)))),
    )))
}

fn bottom_formula() -> Formula {
    Formula::Not(Box::new(top_formula()))
}

/// Lower derived connectives to the core syntax:
/// `(φ | ψ)` to `~(~φ & ~ψ)`, `(φ -> ψ)` to `~(φ & ~ψ)`,
/// `forall x φ` to `~exists x ~φ`, `T` to `~exists v ~(v = v)` and `F`
/// to the negation of that.
pub fn desugar(extended: &ExtendedFormula) -> Formula {
    use ExtendedFormula as E;
    match extended {
        E::Rel(s, a) => Formula::Rel(s.clone(), a.clone()),
        E::RelVar(x, a) => Formula::RelVar(x.clone(), a.clone()),
        E::Eq(x, y) => Formula::Eq(x.clone(), y.clone()),
        E::LoopAtom(k) => Formula::LoopAtom(*k),
        E::Not(c) => Formula::Not(Box::new(desugar(c))),
        E::And(l, r) => Formula::And(Box::new(desugar(l)), Box::new(desugar(r))),
        E::Or(l, r) => Formula::Not(Box::new(Formula::And(
            Box::new(Formula::Not(Box::new(desugar(l)))),
            Box::new(Formula::Not(Box::new(desugar(r)))),
        ))),
        E::Implies(l, r) => Formula::Not(Box::new(Formula::And(
            Box::new(desugar(l)),
            Box::new(Formula::Not(Box::new(desugar(r)))),
        ))),
        E::Exists(x, c) => Formula::Exists(x.clone(), Box::new(desugar(c))),
        E::Forall(x, c) => Formula::Not(Box::new(Formula::Exists(
            x.clone(),
            Box::new(Formula::Not(Box::new(desugar(c)))),
        ))),
        E::NewPoint(x, c) => Formula::NewPoint(x.clone(), Box::new(desugar(c))),
        E::InsertRel(s, a, c) => Formula::InsertRel(s.clone(), a.clone(), Box::new(desugar(c))),
        E::InsertRelVar(x, a, c) => {
            Formula::InsertRelVar(x.clone(), a.clone(), Box::new(desugar(c)))
        }
        E::DeleteRel(s, a, c) => Formula::DeleteRel(s.clone(), a.clone(), Box::new(desugar(c))),
        E::DeleteRelVar(x, a, c) => {
            Formula::DeleteRelVar(x.clone(), a.clone(), Box::new(desugar(c)))
        }
        E::Labeled(k, c) => Formula::Labeled(*k, Box::new(desugar(c))),
        E::Quant(q, x, c) => Formula::Quant(q.clone(), x.clone(), Box::new(desugar(c))),
        E::Top => top_formula(),
        E::Bottom => bottom_formula(),
    }
}

/// Convenience constructors for building formulas in code and tests.
pub mod build {
    use super::*;

    pub fn var(name: &str) -> VariableId {
        VariableId::new(name)
    }

    pub fn rel(name: &str, args: &[&str]) -> Formula {
        Formula::Rel(
            RelationSymbol::new(name, args.len()),
            args.iter().map(|a| var(a)).collect(),
        )
    }

    pub fn relvar(name: &str, args: &[&str]) -> Formula {
        Formula::RelVar(
            RelationVariable::new(name, args.len()),
            args.iter().map(|a| var(a)).collect(),
        )
    }

    pub fn eq(x: &str, y: &str) -> Formula {
        Formula::Eq(var(x), var(y))
    }

    pub fn loop_atom(k: u64) -> Formula {
        Formula::LoopAtom(LoopLabel(k))
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    /// `~(~l & ~r)`, the game-dual rendering of disjunction.
    pub fn or(l: Formula, r: Formula) -> Formula {
        not(and(not(l), not(r)))
    }

    pub fn exists(x: &str, f: Formula) -> Formula {
        Formula::Exists(var(x), Box::new(f))
    }

    pub fn new_point(x: &str, f: Formula) -> Formula {
        Formula::NewPoint(var(x), Box::new(f))
    }

    pub fn labeled(k: u64, f: Formula) -> Formula {
        Formula::Labeled(LoopLabel(k), Box::new(f))
    }
}
