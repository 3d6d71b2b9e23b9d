//! The semantic game as an explicit state machine.
//!
//! A position is a quadruple (structure, assignment, sign, subformula
//! path), optionally extended with the pending witness set of a
//! generalized-quantifier move. The verifying player wins by steering a
//! play into a true first-order atom under sign `+` (or a false one
//! under `-`); plays may also go on forever, in which case nobody wins.
//!
//! Role summary, sign `+` (swap the players for `-`):
//! conjunction is picked by the falsifier; existentials, tuple
//! insertions/deletions and loop-atom jumps are picked by the verifier;
//! negation flips the sign; `new x` and labeled wrappers move by
//! themselves. A quantifier node takes two positions: the verifier picks
//! a witness set, then the falsifier picks a point inside it (sign kept)
//! or outside it (sign flipped).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::ast::{labeled_nodes, Formula, FormulaPath, FreeVar, LoopLabel, VariableId};
use crate::quantifier::{q_interpretation, QuantifierError, QuantifierRegistry};
use crate::structure::{Assignment, Binding, ElementId, Structure, Tuple};

/// The sign carried by a position. `Plus` means the verifier is trying
/// to win on truth, `Minus` on falsity.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// The two players: the verifier (`Exists`) and the falsifier (`Forall`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Player {
    Exists,
    Forall,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Exists => Player::Forall,
            Player::Forall => Player::Exists,
        }
    }

    /// The player acting "existentially" at this sign: `Exists` under
    /// `+`, `Forall` under `-`.
    fn verifier_at(sign: Sign) -> Player {
        match sign {
            Sign::Plus => Player::Exists,
            Sign::Minus => Player::Forall,
        }
    }

    /// Dually, the player acting "universally" at this sign.
    fn falsifier_at(sign: Sign) -> Player {
        Player::verifier_at(sign).opponent()
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Exists => "E",
            Player::Forall => "A",
        })
    }
}

/// A game position. Carries full snapshots of the structure and
/// assignment, so positions are self-contained values, hashable and
/// comparable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Position {
    pub structure: Structure,
    pub assignment: Assignment,
    pub sign: Sign,
    /// Address of the current subformula within the fixed root.
    pub at: FormulaPath,
    /// When present, a quantifier witness set has been chosen at this
    /// node and the point-picking stage is due.
    pub pending: Option<BTreeSet<ElementId>>,
}

impl Position {
    /// Deterministic single-line rendering: sorted domain, sorted tuples
    /// per symbol, sorted assignment entries, sign, path, and the pending
    /// witness set if any. Used as the key for strategies and in traces.
    pub fn canonical(&self) -> String {
        let mut out = String::from("dom={");
        for (i, e) in self.structure.domain().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&alloc::format!("{e}"));
        }
        out.push('}');
        for symbol in self.structure.symbols() {
            out.push_str(&alloc::format!(" {}={{", symbol.name));
            let tuples = self.structure.tuples(symbol).expect("own symbol");
            for (i, t) in tuples.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                push_tuple(&mut out, t);
            }
            out.push('}');
        }
        out.push_str(" |");
        let mut any = false;
        for (x, a) in self.assignment.individuals() {
            out.push_str(&alloc::format!(" {x}={a}"));
            any = true;
        }
        for (x, set) in self.assignment.relationals() {
            out.push_str(&alloc::format!(" ${}={{", x.name));
            for (i, t) in set.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                push_tuple(&mut out, t);
            }
            out.push('}');
            any = true;
        }
        if !any {
            out.push_str(" -");
        }
        out.push_str(&alloc::format!(" | sign={} at={}", self.sign, self.at));
        if let Some(set) = &self.pending {
            out.push_str(" pend={");
            for (i, e) in set.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&alloc::format!("{e}"));
            }
            out.push('}');
        }
        out
    }
}

fn push_tuple(out: &mut String, t: &[ElementId]) {
    out.push('(');
    for (i, e) in t.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&alloc::format!("{e}"));
    }
    out.push(')');
}

/// Which conjunct of a conjunction.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Side {
    Left,
    Right,
}

/// Inside or outside the chosen witness set.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum PointKind {
    Inside,
    Outside,
}

/// A move. The variant must match the constructor at the position.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Move {
    PickConjunct(Side),
    PickElement(ElementId),
    PickTuple(Tuple),
    /// Jump from a loop atom to a same-label labeled node.
    JumpTo(FormulaPath),
    PickWitnessSet(BTreeSet<ElementId>),
    PickPoint(PointKind, ElementId),
    /// The single transition of negation, point insertion and labeled
    /// wrappers.
    Forced,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::PickConjunct(Side::Left) => f.write_str("conjunct:L"),
            Move::PickConjunct(Side::Right) => f.write_str("conjunct:R"),
            Move::PickElement(e) => write!(f, "elem:{e}"),
            Move::PickTuple(t) => {
                f.write_str("tuple:(")?;
                for (i, e) in t.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str(")")
            }
            Move::JumpTo(p) => write!(f, "jump:{p}"),
            Move::PickWitnessSet(set) => {
                f.write_str("set:{")?;
                for (i, e) in set.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str("}")
            }
            Move::PickPoint(PointKind::Inside, e) => write!(f, "point:in:{e}"),
            Move::PickPoint(PointKind::Outside, e) => write!(f, "point:out:{e}"),
            Move::Forced => f.write_str("forced"),
        }
    }
}

/// Whether a position ends the play, and for whom.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TerminalStatus {
    Ongoing,
    Win(Player),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GameError {
    /// The formula has a free variable the starting assignment misses.
    UnassignedFreeVariable(FreeVar),
    /// An individual variable was read at an atom without a binding.
    UnassignedVariable(VariableId),
    InvalidPath(FormulaPath),
    IllegalMove { at: FormulaPath, mv: Move },
    MoveAtTerminal(FormulaPath),
    Quantifier(QuantifierError),
}

impl fmt::Display for GameError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameError::UnassignedFreeVariable(v) => {
                write!(f, "free variable `{v}` has no initial binding")
            }
            GameError::UnassignedVariable(x) => {
                write!(f, "variable `{x}` is unassigned at an atomic position")
            }
            GameError::InvalidPath(p) => write!(f, "path {p} does not address a node"),
            GameError::IllegalMove { at, mv } => write!(f, "move `{mv}` is illegal at {at}"),
            GameError::MoveAtTerminal(p) => write!(f, "position at {p} is terminal"),
            GameError::Quantifier(e) => write!(f, "{e}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GameError {}

impl From<QuantifierError> for GameError {
    fn from(e: QuantifierError) -> Self {
        GameError::Quantifier(e)
    }
}

/// Everything the game rules need besides the position: the fixed root
/// formula, the quantifier registry and cap, and the precomputed jump
/// targets per label.
#[derive(Clone, Debug)]
pub struct GameContext<'a> {
    root: &'a Formula,
    quantifiers: QuantifierRegistry,
    subset_cap: usize,
    jump_targets: BTreeMap<LoopLabel, Vec<FormulaPath>>,
}

/// Default cap on the domain size for quantifier subset enumeration.
pub const DEFAULT_SUBSET_CAP: usize = 12;

impl<'a> GameContext<'a> {
    pub fn new(root: &'a Formula) -> Self {
        GameContext::with_quantifiers(root, crate::quantifier::builtin_quantifiers(), DEFAULT_SUBSET_CAP)
    }

    pub fn with_quantifiers(
        root: &'a Formula,
        quantifiers: QuantifierRegistry,
        subset_cap: usize,
    ) -> Self {
        GameContext {
            root,
            quantifiers,
            subset_cap,
            jump_targets: labeled_nodes(root),
        }
    }

    pub fn root(&self) -> &'a Formula {
        self.root
    }

    pub fn quantifiers(&self) -> &QuantifierRegistry {
        &self.quantifiers
    }

    pub fn subset_cap(&self) -> usize {
        self.subset_cap
    }

    /// All labeled nodes carrying `label`, in preorder.
    pub fn jump_targets(&self, label: LoopLabel) -> &[FormulaPath] {
        self.jump_targets
            .get(&label)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn node_at(&self, path: &FormulaPath) -> Result<&'a Formula, GameError> {
        self.root
            .node_at(path)
            .ok_or_else(|| GameError::InvalidPath(path.clone()))
    }
}

/// The starting position of the game on `(structure, assignment, sign)`.
/// Fails if the assignment does not cover the root's free variables.
pub fn initial_position(
    structure: &Structure,
    assignment: &Assignment,
    sign: Sign,
    ctx: &GameContext<'_>,
) -> Result<Position, GameError> {
    for v in crate::ast::free_variables(ctx.root()) {
        let covered = match &v {
            FreeVar::Individual(x) => assignment.get(x).is_some(),
            FreeVar::Relational(x) => assignment.get_relational(x).is_some(),
        };
        if !covered {
            return Err(GameError::UnassignedFreeVariable(v));
        }
    }
    Ok(Position {
        structure: structure.clone(),
        assignment: assignment.clone(),
        sign,
        at: FormulaPath::root(),
        pending: None,
    })
}

/// Truth of a first-order atom under the structure and assignment. An
/// unassigned relation variable reads as the empty set; an unassigned
/// individual variable is an error.
pub fn atomic_eval(
    structure: &Structure,
    assignment: &Assignment,
    atom: &Formula,
) -> Result<bool, GameError> {
    let resolve = |x: &VariableId| {
        assignment
            .get(x)
            .ok_or_else(|| GameError::UnassignedVariable(x.clone()))
    };
    match atom {
        Formula::Rel(symbol, args) => {
            let tuple: Tuple = args.iter().map(resolve).collect::<Result<_, _>>()?;
            Ok(structure.has_tuple(symbol, &tuple))
        }
        Formula::RelVar(rv, args) => {
            let tuple: Tuple = args.iter().map(resolve).collect::<Result<_, _>>()?;
            Ok(assignment
                .get_relational(rv)
                .map(|set| set.contains(&tuple))
                .unwrap_or(false))
        }
        Formula::Eq(x, y) => Ok(resolve(x)? == resolve(y)?),
        other => panic!("atomic_eval on non-atom {other:?}"),
    }
}

/// Is the position terminal, and who wins it? First-order atoms end the
/// play with the winner determined by sign and atomic truth; a loop atom
/// with no same-label target ends it with a win for the falsifying role;
/// a quantifier node whose family of witness sets is empty loses for the
/// player who was to choose one.
pub fn terminal_status(ctx: &GameContext<'_>, p: &Position) -> Result<TerminalStatus, GameError> {
    let node = ctx.node_at(&p.at)?;
    match node {
        Formula::Rel(..) | Formula::RelVar(..) | Formula::Eq(..) => {
            let holds = atomic_eval(&p.structure, &p.assignment, node)?;
            let winner = match (p.sign, holds) {
                (Sign::Plus, true) | (Sign::Minus, false) => Player::Exists,
                (Sign::Plus, false) | (Sign::Minus, true) => Player::Forall,
            };
            Ok(TerminalStatus::Win(winner))
        }
        Formula::LoopAtom(label) => {
            if ctx.jump_targets(*label).is_empty() {
                // Pathological case: no jump target exists, the play ends.
                let winner = match p.sign {
                    Sign::Plus => Player::Forall,
                    Sign::Minus => Player::Exists,
                };
                Ok(TerminalStatus::Win(winner))
            } else {
                Ok(TerminalStatus::Ongoing)
            }
        }
        Formula::Quant(name, _, _) if p.pending.is_none() => {
            let def = ctx.quantifiers().resolve(name)?;
            let family = q_interpretation(def, &p.structure, ctx.subset_cap())?;
            if family.is_empty() {
                // The set chooser has nothing to choose and loses.
                Ok(TerminalStatus::Win(Player::falsifier_at(p.sign)))
            } else {
                Ok(TerminalStatus::Ongoing)
            }
        }
        _ => Ok(TerminalStatus::Ongoing),
    }
}

/// Who moves at a non-terminal position; `None` means the transition is
/// forced.
pub fn mover(ctx: &GameContext<'_>, p: &Position) -> Result<Option<Player>, GameError> {
    let node = ctx.node_at(&p.at)?;
    Ok(match node {
        Formula::Not(..) | Formula::NewPoint(..) | Formula::Labeled(..) => None,
        Formula::And(..) => Some(Player::falsifier_at(p.sign)),
        Formula::Exists(..)
        | Formula::InsertRel(..)
        | Formula::InsertRelVar(..)
        | Formula::DeleteRel(..)
        | Formula::DeleteRelVar(..)
        | Formula::LoopAtom(..) => Some(Player::verifier_at(p.sign)),
        Formula::Quant(..) => {
            if p.pending.is_none() {
                Some(Player::verifier_at(p.sign))
            } else {
                Some(Player::falsifier_at(p.sign))
            }
        }
        Formula::Rel(..) | Formula::RelVar(..) | Formula::Eq(..) => None,
    })
}

/// Every tuple in `domain^k`, in lexicographic order.
fn all_tuples(structure: &Structure, k: usize) -> Vec<Tuple> {
    let elements: Vec<ElementId> = structure.domain().collect();
    let mut out = Vec::new();
    let mut idx = alloc::vec![0usize; k];
    loop {
        out.push(idx.iter().map(|&i| elements[i]).collect());
        let mut pos = k;
        loop {
            if pos == 0 {
                return out;
            }
            idx[pos - 1] += 1;
            if idx[pos - 1] < elements.len() {
                break;
            }
            idx[pos - 1] = 0;
            pos -= 1;
        }
    }
}

/// The legal moves of a non-terminal position, in a deterministic order.
pub fn legal_moves(ctx: &GameContext<'_>, p: &Position) -> Result<Vec<Move>, GameError> {
    let node = ctx.node_at(&p.at)?;
    Ok(match node {
        Formula::Not(..) | Formula::NewPoint(..) | Formula::Labeled(..) => {
            alloc::vec![Move::Forced]
        }
        Formula::And(..) => alloc::vec![
            Move::PickConjunct(Side::Left),
            Move::PickConjunct(Side::Right),
        ],
        Formula::Exists(..) => p.structure.domain().map(Move::PickElement).collect(),
        Formula::InsertRel(symbol, ..) | Formula::DeleteRel(symbol, ..) => {
            all_tuples(&p.structure, symbol.arity)
                .into_iter()
                .map(Move::PickTuple)
                .collect()
        }
        Formula::InsertRelVar(rv, ..) | Formula::DeleteRelVar(rv, ..) => {
            all_tuples(&p.structure, rv.arity)
                .into_iter()
                .map(Move::PickTuple)
                .collect()
        }
        Formula::LoopAtom(label) => ctx
            .jump_targets(*label)
            .iter()
            .cloned()
            .map(Move::JumpTo)
            .collect(),
        Formula::Quant(name, _, _) => match &p.pending {
            None => {
                let def = ctx.quantifiers().resolve(name)?;
                q_interpretation(def, &p.structure, ctx.subset_cap())?
                    .into_iter()
                    .map(Move::PickWitnessSet)
                    .collect()
            }
            Some(set) => {
                let mut moves = Vec::new();
                for e in p.structure.domain() {
                    if set.contains(&e) {
                        moves.push(Move::PickPoint(PointKind::Inside, e));
                    } else {
                        moves.push(Move::PickPoint(PointKind::Outside, e));
                    }
                }
                moves
            }
        },
        Formula::Rel(..) | Formula::RelVar(..) | Formula::Eq(..) => {
            return Err(GameError::MoveAtTerminal(p.at.clone()))
        }
    })
}

/// Apply one transition. `mv` must come from `legal_moves`.
pub fn apply_move(ctx: &GameContext<'_>, p: &Position, mv: &Move) -> Result<Position, GameError> {
    let node = ctx.node_at(&p.at)?;
    let illegal = || GameError::IllegalMove {
        at: p.at.clone(),
        mv: mv.clone(),
    };
    let descend = |p: &Position, index: u8| -> Position {
        Position {
            structure: p.structure.clone(),
            assignment: p.assignment.clone(),
            sign: p.sign,
            at: p.at.child(index),
            pending: None,
        }
    };

    match (node, mv) {
        (Formula::Not(..), Move::Forced) => {
            let mut next = descend(p, 0);
            next.sign = p.sign.flip();
            Ok(next)
        }
        (Formula::Labeled(..), Move::Forced) => Ok(descend(p, 0)),
        (Formula::NewPoint(x, _), Move::Forced) => {
            let (structure, fresh) = p.structure.add_fresh_point();
            let assignment = p.assignment.bind(x.clone(), fresh);
            Ok(Position {
                structure,
                assignment,
                sign: p.sign,
                at: p.at.child(0),
                pending: None,
            })
        }
        (Formula::And(..), Move::PickConjunct(side)) => Ok(descend(
            p,
            match side {
                Side::Left => 0,
                Side::Right => 1,
            },
        )),
        (Formula::Exists(x, _), Move::PickElement(a)) => {
            if !p.structure.contains(*a) {
                return Err(illegal());
            }
            let mut next = descend(p, 0);
            next.assignment = p.assignment.bind(x.clone(), *a);
            Ok(next)
        }
        (Formula::InsertRel(symbol, args, _), Move::PickTuple(tuple)) => {
            let structure = p.structure.insert_tuple(symbol, tuple).map_err(|_| illegal())?;
            let assignment = bind_args(&p.assignment, args, tuple);
            Ok(Position {
                structure,
                assignment,
                sign: p.sign,
                at: p.at.child(0),
                pending: None,
            })
        }
        (Formula::DeleteRel(symbol, args, _), Move::PickTuple(tuple)) => {
            let structure = p.structure.delete_tuple(symbol, tuple).map_err(|_| illegal())?;
            let assignment = bind_args(&p.assignment, args, tuple);
            Ok(Position {
                structure,
                assignment,
                sign: p.sign,
                at: p.at.child(0),
                pending: None,
            })
        }
        (Formula::InsertRelVar(rv, args, _), Move::PickTuple(tuple)) => {
            if tuple.len() != rv.arity || tuple.iter().any(|e| !p.structure.contains(*e)) {
                return Err(illegal());
            }
            // C := g(X) if assigned, the empty set otherwise.
            let mut current = p.assignment.get_relational(rv).cloned().unwrap_or_default();
            current.insert(tuple.clone());
            let assignment = bind_args(&p.assignment, args, tuple).bind_relational(rv.clone(), current);
            let mut next = descend(p, 0);
            next.assignment = assignment;
            Ok(next)
        }
        (Formula::DeleteRelVar(rv, args, _), Move::PickTuple(tuple)) => {
            if tuple.len() != rv.arity || tuple.iter().any(|e| !p.structure.contains(*e)) {
                return Err(illegal());
            }
            let mut current = p.assignment.get_relational(rv).cloned().unwrap_or_default();
            current.remove(tuple);
            let assignment = bind_args(&p.assignment, args, tuple).bind_relational(rv.clone(), current);
            let mut next = descend(p, 0);
            next.assignment = assignment;
            Ok(next)
        }
        (Formula::LoopAtom(label), Move::JumpTo(target)) => {
            if !ctx.jump_targets(*label).contains(target) {
                return Err(illegal());
            }
            // Structure, assignment and sign carry over unchanged.
            Ok(Position {
                structure: p.structure.clone(),
                assignment: p.assignment.clone(),
                sign: p.sign,
                at: target.clone(),
                pending: None,
            })
        }
        (Formula::Quant(..), Move::PickWitnessSet(set)) if p.pending.is_none() => {
            if set.iter().any(|e| !p.structure.contains(*e)) {
                return Err(illegal());
            }
            Ok(Position {
                structure: p.structure.clone(),
                assignment: p.assignment.clone(),
                sign: p.sign,
                at: p.at.clone(),
                pending: Some(set.clone()),
            })
        }
        (Formula::Quant(_, x, _), Move::PickPoint(kind, a)) => {
            let set = p.pending.as_ref().ok_or_else(illegal)?;
            let inside = set.contains(a);
            if !p.structure.contains(*a)
                || (inside && *kind != PointKind::Inside)
                || (!inside && *kind != PointKind::Outside)
            {
                return Err(illegal());
            }
            let mut next = descend(p, 0);
            next.assignment = p.assignment.bind(x.clone(), *a);
            // Inside keeps the sign, outside flips it.
            if *kind == PointKind::Outside {
                next.sign = p.sign.flip();
            }
            Ok(next)
        }
        _ => Err(illegal()),
    }
}

fn bind_args(assignment: &Assignment, args: &[VariableId], tuple: &[ElementId]) -> Assignment {
    debug_assert_eq!(args.len(), tuple.len());
    let mut next = assignment.clone();
    for (x, a) in args.iter().zip(tuple) {
        next = next.bind(x.clone(), *a);
    }
    next
}

/// `update_assignment` as a free operation: simultaneous checked
/// override. Re-exported here for discoverability next to the rules that
/// use it.
pub fn update_assignment(
    assignment: &Assignment,
    structure: &Structure,
    bindings: &[Binding],
) -> Result<Assignment, crate::structure::StructureError> {
    assignment.update(structure, bindings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::build::*;
    use crate::ast::RelationSymbol;

    fn ctx_on<'a>(root: &'a Formula) -> GameContext<'a> {
        GameContext::new(root)
    }

    fn start(s: &Structure, sign: Sign, ctx: &GameContext<'_>) -> Position {
        initial_position(s, &Assignment::empty(), sign, ctx).unwrap()
    }

    #[test]
    fn initial_position_requires_free_variable_bindings() {
        let root = rel("P", &["x"]);
        let mut s = Structure::new(1).unwrap();
        s.declare_symbol(RelationSymbol::new("P", 1));
        let ctx = ctx_on(&root);
        assert!(matches!(
            initial_position(&s, &Assignment::empty(), Sign::Plus, &ctx),
            Err(GameError::UnassignedFreeVariable(_))
        ));
        let f = Assignment::empty().bind(var("x"), ElementId(0));
        let p = initial_position(&s, &f, Sign::Plus, &ctx).unwrap();
        assert!(p.at.is_root());
    }

    #[test]
    fn sentence_starts_from_empty_assignment() {
        let root = exists("x", eq("x", "x"));
        let s = Structure::new(2).unwrap();
        let ctx = ctx_on(&root);
        let p = start(&s, Sign::Plus, &ctx);
        assert_eq!(p.sign, Sign::Plus);
        assert!(p.at.is_root());
    }

    #[test]
    fn movers_follow_the_rules() {
        let s = Structure::new(2).unwrap();

        let conj = and(eq("x", "x"), eq("y", "y"));
        let ctx = ctx_on(&conj);
        let p = Position {
            structure: s.clone(),
            assignment: Assignment::empty(),
            sign: Sign::Plus,
            at: FormulaPath::root(),
            pending: None,
        };
        assert_eq!(mover(&ctx, &p).unwrap(), Some(Player::Forall));
        let m = Position { sign: Sign::Minus, ..p.clone() };
        assert_eq!(mover(&ctx, &m).unwrap(), Some(Player::Exists));

        let ex = exists("x", eq("x", "x"));
        let ctx = ctx_on(&ex);
        let p = start(&s, Sign::Minus, &ctx);
        assert_eq!(mover(&ctx, &p).unwrap(), Some(Player::Forall));

        let fresh = new_point("x", eq("x", "x"));
        let ctx = ctx_on(&fresh);
        let p = start(&s, Sign::Plus, &ctx);
        assert_eq!(mover(&ctx, &p).unwrap(), None);
    }

    #[test]
    fn exists_offers_one_move_per_element() {
        let root = exists("x", eq("x", "x"));
        let s = Structure::new(3).unwrap();
        let ctx = ctx_on(&root);
        let p = start(&s, Sign::Plus, &ctx);
        assert_eq!(legal_moves(&ctx, &p).unwrap().len(), 3);
    }

    #[test]
    fn insert_rel_offers_all_tuples() {
        let root = Formula::InsertRel(
            RelationSymbol::new("R", 2),
            alloc::vec![var("x"), var("y")],
            alloc::boxed::Box::new(eq("x", "y")),
        );
        let mut s = Structure::new(2).unwrap();
        s.declare_symbol(RelationSymbol::new("R", 2));
        let ctx = ctx_on(&root);
        let p = start(&s, Sign::Plus, &ctx);
        assert_eq!(legal_moves(&ctx, &p).unwrap().len(), 4);
    }

    #[test]
    fn loop_atom_jumps_to_the_single_target() {
        let mut s = Structure::new(1).unwrap();
        s.declare_symbol(RelationSymbol::new("P", 1));
        let root = labeled(1, or(rel("P", &["x"]), loop_atom(1)));
        let ctx = ctx_on(&root);
        // Walk to the loop atom: label, not, and(right), not, atom.
        let f = Assignment::empty().bind(var("x"), ElementId(0));
        let mut p = initial_position(&s, &f, Sign::Plus, &ctx).unwrap();
        p = apply_move(&ctx, &p, &Move::Forced).unwrap(); // into ~( ~P & ~1 )
        p = apply_move(&ctx, &p, &Move::Forced).unwrap(); // negation flips
        assert_eq!(p.sign, Sign::Minus);
        p = apply_move(&ctx, &p, &Move::PickConjunct(Side::Right)).unwrap();
        p = apply_move(&ctx, &p, &Move::Forced).unwrap(); // inner negation
        assert_eq!(p.sign, Sign::Plus);
        let moves = legal_moves(&ctx, &p).unwrap();
        assert_eq!(moves, alloc::vec![Move::JumpTo(FormulaPath::root())]);
        let jumped = apply_move(&ctx, &p, &moves[0]).unwrap();
        assert!(jumped.at.is_root());
        assert_eq!(jumped.sign, Sign::Plus);
        assert_eq!(jumped.assignment, p.assignment);
    }

    #[test]
    fn negation_flips_and_descends() {
        let root = not(eq("x", "x"));
        let s = Structure::new(1).unwrap();
        let f = Assignment::empty().bind(var("x"), ElementId(0));
        let ctx = ctx_on(&root);
        let p = initial_position(&s, &f, Sign::Plus, &ctx).unwrap();
        let next = apply_move(&ctx, &p, &Move::Forced).unwrap();
        assert_eq!(next.sign, Sign::Minus);
        assert_eq!(next.at, FormulaPath::from_indices([0u8]));
    }

    #[test]
    fn new_point_adds_fresh_element_and_binds() {
        let root = new_point("x", eq("x", "x"));
        let s = Structure::new(1).unwrap();
        let ctx = ctx_on(&root);
        let p = start(&s, Sign::Plus, &ctx);
        let next = apply_move(&ctx, &p, &Move::Forced).unwrap();
        assert_eq!(next.structure.domain_size(), 2);
        assert_eq!(next.assignment.get(&var("x")), Some(ElementId(1)));
    }

    #[test]
    fn insert_relvar_defaults_to_empty_set() {
        let root = Formula::InsertRelVar(
            crate::ast::RelationVariable::new("X", 1),
            alloc::vec![var("x")],
            alloc::boxed::Box::new(relvar("X", &["x"])),
        );
        let s = Structure::new(1).unwrap();
        let ctx = ctx_on(&root);
        let p = start(&s, Sign::Plus, &ctx);
        let next = apply_move(&ctx, &p, &Move::PickTuple(alloc::vec![ElementId(0)])).unwrap();
        let x = crate::ast::RelationVariable::new("X", 1);
        assert_eq!(next.assignment.get_relational(&x).unwrap().len(), 1);
        // The structure itself is untouched.
        assert_eq!(next.structure, p.structure);
    }

    #[test]
    fn atomic_positions_end_with_the_right_winner() {
        let mut s = Structure::new(2).unwrap();
        let psym = RelationSymbol::new("P", 1);
        s.declare_symbol(psym.clone());
        let s = s.insert_tuple(&psym, &[ElementId(0)]).unwrap();
        let root = rel("P", &["x"]);
        let ctx = ctx_on(&root);
        let in_p = Assignment::empty().bind(var("x"), ElementId(0));

        let p = initial_position(&s, &in_p, Sign::Plus, &ctx).unwrap();
        assert_eq!(terminal_status(&ctx, &p).unwrap(), TerminalStatus::Win(Player::Exists));

        let p = initial_position(&s, &in_p, Sign::Minus, &ctx).unwrap();
        assert_eq!(terminal_status(&ctx, &p).unwrap(), TerminalStatus::Win(Player::Forall));

        let out_p = Assignment::empty().bind(var("x"), ElementId(1));
        let p = initial_position(&s, &out_p, Sign::Plus, &ctx).unwrap();
        assert_eq!(terminal_status(&ctx, &p).unwrap(), TerminalStatus::Win(Player::Forall));
    }

    #[test]
    fn orphan_loop_atom_is_terminal_pathological() {
        let root = loop_atom(7);
        let s = Structure::new(1).unwrap();
        let ctx = ctx_on(&root);
        let p = start(&s, Sign::Plus, &ctx);
        assert_eq!(terminal_status(&ctx, &p).unwrap(), TerminalStatus::Win(Player::Forall));
        let p = start(&s, Sign::Minus, &ctx);
        assert_eq!(terminal_status(&ctx, &p).unwrap(), TerminalStatus::Win(Player::Exists));
    }

    #[test]
    fn unassigned_relvar_reads_as_empty() {
        let atom = relvar("X", &["x"]);
        let s = Structure::new(1).unwrap();
        let f = Assignment::empty().bind(var("x"), ElementId(0));
        assert_eq!(atomic_eval(&s, &f, &atom).unwrap(), false);
    }

    #[test]
    fn unassigned_individual_is_an_error() {
        let atom = eq("x", "y");
        let s = Structure::new(1).unwrap();
        let f = Assignment::empty().bind(var("x"), ElementId(0));
        assert!(matches!(
            atomic_eval(&s, &f, &atom),
            Err(GameError::UnassignedVariable(_))
        ));
    }

    #[test]
    fn equality_of_identical_bindings_holds() {
        let atom = eq("x", "y");
        let s = Structure::new(1).unwrap();
        let f = Assignment::empty()
            .bind(var("x"), ElementId(0))
            .bind(var("y"), ElementId(0));
        assert!(atomic_eval(&s, &f, &atom).unwrap());
    }

    mod quantifier_moves {
        use super::*;
        use crate::ast::QuantifierName;

        fn quant(name: &str, x: &str, body: Formula) -> Formula {
            Formula::Quant(
                QuantifierName::new(name),
                VariableId::new(x),
                alloc::boxed::Box::new(body),
            )
        }

        #[test]
        fn empty_family_is_an_immediate_loss_for_the_chooser() {
            // majority over a 1-element domain with zero witnesses allowed:
            // sizes 0 and 1 -> 2*0 > 1 false, 2*1 > 1 true, so family is
            // nonempty; use a table quantifier that rejects everything.
            let mut table = alloc::collections::BTreeMap::new();
            table.insert((1usize, 0usize), false);
            table.insert((1usize, 1usize), false);
            let mut registry = crate::quantifier::builtin_quantifiers();
            registry
                .insert(crate::quantifier::QuantifierDef::new(
                    "never",
                    crate::quantifier::MembershipRule::Table(table),
                ))
                .unwrap();
            let root = quant("never", "x", eq("x", "x"));
            let s = Structure::new(1).unwrap();
            let ctx = GameContext::with_quantifiers(&root, registry, 12);
            let p = start(&s, Sign::Plus, &ctx);
            assert_eq!(
                terminal_status(&ctx, &p).unwrap(),
                TerminalStatus::Win(Player::Forall)
            );
            let m = start(&s, Sign::Minus, &ctx);
            assert_eq!(
                terminal_status(&ctx, &m).unwrap(),
                TerminalStatus::Win(Player::Exists)
            );
        }

        #[test]
        fn forall_set_leaves_only_inside_picks() {
            let root = quant("forall", "x", eq("x", "x"));
            let s = Structure::new(2).unwrap();
            let ctx = ctx_on(&root);
            let p = start(&s, Sign::Plus, &ctx);
            assert_eq!(mover(&ctx, &p).unwrap(), Some(Player::Exists));
            let sets = legal_moves(&ctx, &p).unwrap();
            // forall admits only S = A.
            assert_eq!(sets.len(), 1);
            let staged = apply_move(&ctx, &p, &sets[0]).unwrap();
            assert_eq!(mover(&ctx, &staged).unwrap(), Some(Player::Forall));
            let picks = legal_moves(&ctx, &staged).unwrap();
            assert!(picks
                .iter()
                .all(|m| matches!(m, Move::PickPoint(PointKind::Inside, _))));
            let inside = apply_move(&ctx, &staged, &picks[0]).unwrap();
            assert_eq!(inside.sign, Sign::Plus);
        }

        #[test]
        fn outside_pick_flips_the_sign() {
            let root = quant("even", "x", eq("x", "x"));
            let s = Structure::new(2).unwrap();
            let ctx = ctx_on(&root);
            let p = start(&s, Sign::Minus, &ctx);
            // Under minus the falsifier picks the set.
            assert_eq!(mover(&ctx, &p).unwrap(), Some(Player::Forall));
            let sets = legal_moves(&ctx, &p).unwrap();
            // even admits {} and the full domain; pick the empty set.
            let empty = sets
                .iter()
                .find(|m| matches!(m, Move::PickWitnessSet(s) if s.is_empty()))
                .unwrap();
            let staged = apply_move(&ctx, &p, empty).unwrap();
            assert_eq!(mover(&ctx, &staged).unwrap(), Some(Player::Exists));
            let picks = legal_moves(&ctx, &staged).unwrap();
            assert!(picks
                .iter()
                .all(|m| matches!(m, Move::PickPoint(PointKind::Outside, _))));
            let next = apply_move(&ctx, &staged, &picks[0]).unwrap();
            assert_eq!(next.sign, Sign::Plus);
            assert_eq!(next.pending, None);
        }
    }

    #[test]
    fn canonical_is_single_line_and_deterministic() {
        let mut s = Structure::new(2).unwrap();
        let psym = RelationSymbol::new("P", 1);
        s.declare_symbol(psym.clone());
        let s = s.insert_tuple(&psym, &[ElementId(1)]).unwrap();
        let root = rel("P", &["x"]);
        let ctx = ctx_on(&root);
        let f = Assignment::empty().bind(var("x"), ElementId(1));
        let p = initial_position(&s, &f, Sign::Plus, &ctx).unwrap();
        let c = p.canonical();
        assert!(!c.contains('\n'));
        assert_eq!(c, p.clone().canonical());
        assert_eq!(c, "dom={0,1} P={(1)} | x=1 | sign=+ at=[]");
    }
}
