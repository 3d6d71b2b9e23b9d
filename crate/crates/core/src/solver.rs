//! Three-valued evaluation by bounded AND-OR search with iterative
//! deepening, a Tarski-recursion oracle for the first-order fragment,
//! and positional strategies with an opponent-branching verifier.
//!
//! `bounded_value` answers "can this player force a win within d more
//! transitions?". Deepening probes d = 1, 2, .. up to the budget; a
//! verdict of `Unknown` therefore means no winning strategy with bound
//! at most the budget exists for either player, which is exactly the
//! sound answer available to a terminating procedure on a
//! Turing-complete logic.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::time::Duration;

use crate::ast::{Formula, VariableId};
use crate::game::{
    apply_move, initial_position, legal_moves, mover, terminal_status, GameContext, GameError,
    Move, Player, Position, Sign, TerminalStatus,
};
use crate::quantifier::QuantifierRegistry;
use crate::structure::{Assignment, Structure};

/// Result of a full evaluation: a proof for one of the players together
/// with the deepening level that established it, or unknown at the
/// exhausted budget.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    ProvenTrue { depth: u32 },
    ProvenFalse { depth: u32 },
    Unknown { budget: u32 },
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::ProvenTrue { depth } => write!(f, "proven-true (depth {depth})"),
            Verdict::ProvenFalse { depth } => write!(f, "proven-false (depth {depth})"),
            Verdict::Unknown { budget } => write!(f, "unknown (budget {budget})"),
        }
    }
}

/// Value of a position for a queried player within a depth bound.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BoundedValue {
    Win,
    Lose,
    Unknown,
}

impl BoundedValue {
    fn flip(self) -> BoundedValue {
        match self {
            BoundedValue::Win => BoundedValue::Lose,
            BoundedValue::Lose => BoundedValue::Win,
            BoundedValue::Unknown => BoundedValue::Unknown,
        }
    }
}

/// Search effort counters for one evaluation.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub max_depth_reached: u32,
    pub elapsed: Duration,
    pub memo_hits: u64,
}

/// How iterative deepening advances between probes.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DeepeningStep {
    /// d = 1, 1+s, 1+2s, .. then the budget itself.
    Arithmetic(u32),
    /// d = 1, 2, 4, .. then the budget itself.
    Geometric,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SearchConfig {
    /// Maximum number of transitions a probed strategy may need.
    pub budget: u32,
    pub step: DeepeningStep,
    pub memo: bool,
    /// Domain-size cap for quantifier subset enumeration.
    pub subset_cap: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: 10_000,
            step: DeepeningStep::Arithmetic(1),
            memo: true,
            subset_cap: crate::game::DEFAULT_SUBSET_CAP,
        }
    }
}

/// A positional strategy: one move per canonical position where the
/// owner is to choose.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Strategy {
    owner: Player,
    moves: BTreeMap<String, Move>,
}

impl Strategy {
    pub fn new(owner: Player) -> Self {
        Strategy {
            owner,
            moves: BTreeMap::new(),
        }
    }

    pub fn owner(&self) -> Player {
        self.owner
    }

    pub fn insert(&mut self, position: &Position, mv: Move) {
        self.moves.insert(position.canonical(), mv);
    }

    pub fn get(&self, position: &Position) -> Option<&Move> {
        self.moves.get(&position.canonical())
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &Move)> {
        self.moves.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn insert_raw(&mut self, canonical: String, mv: Move) {
        self.moves.insert(canonical, mv);
    }
}

/// One transition of a recorded play: the position and the move taken
/// from it (`None` at the final position).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PlayStep {
    pub position: Position,
    pub mv: Option<Move>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CounterexampleReason {
    /// A play following the strategy ended in a loss for its owner.
    OwnerLoses,
    /// The strategy has no move at an owner position it reaches.
    StrategyUndefined,
    /// The recorded move is not legal at the reached position.
    IllegalMove,
    /// A play following the strategy outlived the round limit.
    RoundLimitExceeded,
}

impl fmt::Display for CounterexampleReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CounterexampleReason::OwnerLoses => "owner loses the play",
            CounterexampleReason::StrategyUndefined => "strategy undefined at a reached position",
            CounterexampleReason::IllegalMove => "strategy move illegal at a reached position",
            CounterexampleReason::RoundLimitExceeded => "play exceeds the round limit",
        })
    }
}

/// Why and how a strategy fails, with the offending play.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Counterexample {
    pub reason: CounterexampleReason,
    pub play: Vec<PlayStep>,
}

/// Outcome of replaying a strategy against all opponent lines.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum VerifyOutcome {
    /// All plays end in owner wins within this many rounds.
    Verified { bound: u32 },
    Counterexample(Counterexample),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TarskiError {
    NotFoFragment,
    Unassigned(VariableId),
}

impl fmt::Display for TarskiError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TarskiError::NotFoFragment => write!(f, "formula is outside the first-order fragment"),
            TarskiError::Unassigned(x) => write!(f, "variable `{x}` is unassigned"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for TarskiError {}

/// Standard Tarski recursion over atoms, negation, conjunction and the
/// existential quantifier. Independent of the game path; used as its
/// oracle.
pub fn eval_fo_tarski(
    structure: &Structure,
    assignment: &Assignment,
    formula: &Formula,
) -> Result<bool, TarskiError> {
    let resolve = |x: &VariableId| {
        assignment
            .get(x)
            .ok_or_else(|| TarskiError::Unassigned(x.clone()))
    };
    match formula {
        Formula::Rel(symbol, args) => {
            let tuple: Vec<_> = args.iter().map(resolve).collect::<Result<_, _>>()?;
            Ok(structure.has_tuple(symbol, &tuple))
        }
        Formula::RelVar(rv, args) => {
            let tuple: Vec<_> = args.iter().map(resolve).collect::<Result<_, _>>()?;
            Ok(assignment
                .get_relational(rv)
                .map(|set| set.contains(&tuple))
                .unwrap_or(false))
        }
        Formula::Eq(x, y) => Ok(resolve(x)? == resolve(y)?),
        Formula::Not(inner) => Ok(!eval_fo_tarski(structure, assignment, inner)?),
        Formula::And(l, r) => Ok(eval_fo_tarski(structure, assignment, l)?
            && eval_fo_tarski(structure, assignment, r)?),
        Formula::Exists(x, inner) => {
            for a in structure.domain() {
                if eval_fo_tarski(structure, &assignment.bind(x.clone(), a), inner)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        _ => Err(TarskiError::NotFoFragment),
    }
}

/// Memo entries are depth-qualified: a decided value established with d
/// transitions of lookahead stays valid at every deeper probe, while an
/// unknown is only reusable at shallower ones.
#[derive(Clone, Copy, Debug)]
enum MemoEntry {
    /// Verifier-relative Win/Lose established within this depth.
    Decided(BoundedValue, u32),
    /// Still unknown after searching this deep.
    Unknown(u32),
}

/// Bounded search engine over one root formula. Holds the game context
/// and the memo table; create one per formula and reuse it across
/// queries.
pub struct Solver<'a> {
    ctx: GameContext<'a>,
    config: SearchConfig,
    memo: BTreeMap<Position, MemoEntry>,
    stats: SearchStats,
}

impl<'a> Solver<'a> {
    pub fn new(root: &'a Formula, config: SearchConfig) -> Self {
        Solver::with_quantifiers(root, crate::quantifier::builtin_quantifiers(), config)
    }

    pub fn with_quantifiers(
        root: &'a Formula,
        quantifiers: QuantifierRegistry,
        config: SearchConfig,
    ) -> Self {
        let ctx = GameContext::with_quantifiers(root, quantifiers, config.subset_cap);
        Solver {
            ctx,
            config,
            memo: BTreeMap::new(),
            stats: SearchStats::default(),
        }
    }

    pub fn context(&self) -> &GameContext<'a> {
        &self.ctx
    }

    pub fn stats(&self) -> SearchStats {
        self.stats
    }

    /// The starting position of the game for this solver's root.
    pub fn start(
        &self,
        structure: &Structure,
        assignment: &Assignment,
        sign: Sign,
    ) -> Result<Position, GameError> {
        initial_position(structure, assignment, sign, &self.ctx)
    }

    /// Can `who` force a win from `p` within `depth` transitions? `Lose`
    /// means the opponent can.
    pub fn bounded_value(
        &mut self,
        p: &Position,
        who: Player,
        depth: u32,
    ) -> Result<BoundedValue, GameError> {
        let v = self.search(p, depth, 0)?;
        Ok(match who {
            Player::Exists => v,
            Player::Forall => v.flip(),
        })
    }

    /// Iterative-deepening evaluation of the game on
    /// `(structure, assignment, sign)` rooted at this solver's formula.
    pub fn evaluate(
        &mut self,
        structure: &Structure,
        assignment: &Assignment,
        sign: Sign,
    ) -> Result<(Verdict, SearchStats), GameError> {
        let start = self.start(structure, assignment, sign)?;
        self.stats = SearchStats::default();
        #[cfg(feature = "std")]
        let clock = std::time::Instant::now();

        let mut verdict = Verdict::Unknown {
            budget: self.config.budget,
        };
        for depth in deepening_levels(self.config.budget, self.config.step) {
            match self.search(&start, depth, 0)? {
                BoundedValue::Win => {
                    verdict = Verdict::ProvenTrue { depth };
                    break;
                }
                BoundedValue::Lose => {
                    verdict = Verdict::ProvenFalse { depth };
                    break;
                }
                BoundedValue::Unknown => {}
            }
        }

        #[cfg(feature = "std")]
        {
            self.stats.elapsed = clock.elapsed();
        }
        Ok((verdict, self.stats))
    }

    /// Verifier-relative bounded value: `Win` means the verifier forces
    /// a win within `depth`, `Lose` means the falsifier does.
    fn search(&mut self, p: &Position, depth: u32, from_start: u32) -> Result<BoundedValue, GameError> {
        if let TerminalStatus::Win(winner) = terminal_status(&self.ctx, p)? {
            self.stats.nodes_expanded += 1;
            self.stats.max_depth_reached = self.stats.max_depth_reached.max(from_start);
            return Ok(match winner {
                Player::Exists => BoundedValue::Win,
                Player::Forall => BoundedValue::Lose,
            });
        }
        if depth == 0 {
            return Ok(BoundedValue::Unknown);
        }
        if self.config.memo {
            match self.memo.get(p) {
                Some(MemoEntry::Decided(v, d)) if depth >= *d => {
                    self.stats.memo_hits += 1;
                    return Ok(*v);
                }
                Some(MemoEntry::Unknown(d)) if depth <= *d => {
                    self.stats.memo_hits += 1;
                    return Ok(BoundedValue::Unknown);
                }
                _ => {}
            }
        }

        self.stats.nodes_expanded += 1;
        self.stats.max_depth_reached = self.stats.max_depth_reached.max(from_start);

        let to_move = mover(&self.ctx, p)?;
        let moves = legal_moves(&self.ctx, p)?;
        let mut children = Vec::with_capacity(moves.len());
        for mv in &moves {
            children.push(apply_move(&self.ctx, p, mv)?);
        }
        // One-ply lookahead ordering: put children the mover wins
        // outright at the front, so wins and refutations surface without
        // expanding sibling subtrees.
        if let Some(player) = to_move {
            let mut ranked: Vec<(u8, Position)> = Vec::with_capacity(children.len());
            for child in children {
                let rank = match terminal_status(&self.ctx, &child)? {
                    TerminalStatus::Win(w) if w == player => 0,
                    TerminalStatus::Ongoing => 1,
                    TerminalStatus::Win(_) => 2,
                };
                ranked.push((rank, child));
            }
            ranked.sort_by_key(|(rank, _)| *rank);
            children = ranked.into_iter().map(|(_, c)| c).collect();
        }

        // The verifier owns OR nodes; everything else (falsifier moves
        // and forced transitions) is an AND node.
        let is_or_node = to_move == Some(Player::Exists);
        let mut value = if is_or_node {
            BoundedValue::Lose
        } else {
            BoundedValue::Win
        };
        for child in &children {
            let v = self.search(child, depth - 1, from_start + 1)?;
            match (is_or_node, v) {
                (true, BoundedValue::Win) => {
                    value = BoundedValue::Win;
                    break;
                }
                (true, BoundedValue::Unknown) => value = BoundedValue::Unknown,
                (true, BoundedValue::Lose) => {}
                (false, BoundedValue::Lose) => {
                    value = BoundedValue::Lose;
                    break;
                }
                (false, BoundedValue::Unknown) => value = BoundedValue::Unknown,
                (false, BoundedValue::Win) => {}
            }
        }

        if self.config.memo {
            let entry = match value {
                BoundedValue::Unknown => MemoEntry::Unknown(depth),
                decided => MemoEntry::Decided(decided, depth),
            };
            self.memo
                .entry(p.clone())
                .and_modify(|existing| merge_memo(existing, entry))
                .or_insert(entry);
        }
        Ok(value)
    }

    /// Extract a positional winning strategy for `who` from `p`, defined
    /// on every `who`-to-move position reachable while following it.
    /// Returns `None` when `who` has no win within `depth`.
    pub fn extract_strategy(
        &mut self,
        p: &Position,
        who: Player,
        depth: u32,
    ) -> Result<Option<Strategy>, GameError> {
        if self.bounded_value(p, who, depth)? != BoundedValue::Win {
            return Ok(None);
        }
        let mut strategy = Strategy::new(who);
        let mut visited = BTreeSet::new();
        self.extract_rec(p, who, depth, &mut strategy, &mut visited)?;
        Ok(Some(strategy))
    }

    fn extract_rec(
        &mut self,
        p: &Position,
        who: Player,
        depth: u32,
        strategy: &mut Strategy,
        visited: &mut BTreeSet<Position>,
    ) -> Result<(), GameError> {
        if let TerminalStatus::Win(_) = terminal_status(&self.ctx, p)? {
            return Ok(());
        }
        if !visited.insert(p.clone()) {
            return Ok(());
        }
        let to_move = mover(&self.ctx, p)?;
        let moves = legal_moves(&self.ctx, p)?;
        if to_move == Some(who) {
            for mv in &moves {
                let child = apply_move(&self.ctx, p, mv)?;
                if self.bounded_value(&child, who, depth - 1)? == BoundedValue::Win {
                    strategy.insert(p, mv.clone());
                    return self.extract_rec(&child, who, depth - 1, strategy, visited);
                }
            }
            unreachable!("a winning position has a winning child");
        }
        for mv in &moves {
            let child = apply_move(&self.ctx, p, mv)?;
            self.extract_rec(&child, who, depth - 1, strategy, visited)?;
        }
        Ok(())
    }

    /// A single deterministic play for a proven game: the winner follows
    /// its bounded-win choice, forced transitions fire, and the loser
    /// plays its first legal move.
    pub fn principal_play(
        &mut self,
        start: &Position,
        winner: Player,
        depth: u32,
    ) -> Result<Vec<PlayStep>, GameError> {
        let mut steps = Vec::new();
        let mut p = start.clone();
        let mut remaining = depth;
        loop {
            if let TerminalStatus::Win(_) = terminal_status(&self.ctx, &p)? {
                steps.push(PlayStep {
                    position: p,
                    mv: None,
                });
                return Ok(steps);
            }
            if remaining == 0 {
                steps.push(PlayStep {
                    position: p,
                    mv: None,
                });
                return Ok(steps);
            }
            let to_move = mover(&self.ctx, &p)?;
            let moves = legal_moves(&self.ctx, &p)?;
            let chosen = if to_move == Some(winner) {
                let mut pick = None;
                for mv in &moves {
                    let child = apply_move(&self.ctx, &p, mv)?;
                    if self.bounded_value(&child, winner, remaining - 1)? == BoundedValue::Win {
                        pick = Some(mv.clone());
                        break;
                    }
                }
                pick.unwrap_or_else(|| moves[0].clone())
            } else {
                moves[0].clone()
            };
            let next = apply_move(&self.ctx, &p, &chosen)?;
            steps.push(PlayStep {
                position: p,
                mv: Some(chosen),
            });
            p = next;
            remaining -= 1;
        }
    }
}

fn merge_memo(existing: &mut MemoEntry, new: MemoEntry) {
    *existing = match (*existing, new) {
        // Keep the cheaper proof of the same decided value.
        (MemoEntry::Decided(v, d1), MemoEntry::Decided(w, d2)) => {
            debug_assert_eq!(v, w, "conflicting decided memo values");
            MemoEntry::Decided(v, d1.min(d2))
        }
        // A decided value beats any unknown.
        (MemoEntry::Decided(v, d), MemoEntry::Unknown(_))
        | (MemoEntry::Unknown(_), MemoEntry::Decided(v, d)) => MemoEntry::Decided(v, d),
        (MemoEntry::Unknown(d1), MemoEntry::Unknown(d2)) => MemoEntry::Unknown(d1.max(d2)),
    };
}

/// The probe depths for a budget: 1, advancing by the step, always
/// ending exactly at the budget.
fn deepening_levels(budget: u32, step: DeepeningStep) -> Vec<u32> {
    let mut levels = Vec::new();
    let mut d: u32 = 1;
    while d < budget {
        levels.push(d);
        d = match step {
            DeepeningStep::Arithmetic(s) => d.saturating_add(s.max(1)),
            DeepeningStep::Geometric => d.saturating_mul(2),
        };
    }
    if budget >= 1 {
        levels.push(budget);
    }
    levels
}

/// Replay `strategy` from `start`, branching over every opponent choice;
/// owner moves come from the strategy and forced transitions fire by
/// themselves. All plays must end in owner wins within `max_rounds`.
pub fn verify_strategy(
    ctx: &GameContext<'_>,
    strategy: &Strategy,
    start: &Position,
    max_rounds: u32,
) -> Result<VerifyOutcome, GameError> {
    let mut trail = Vec::new();
    match verify_rec(ctx, strategy, start, max_rounds, &mut trail)? {
        Ok(bound) => Ok(VerifyOutcome::Verified { bound }),
        Err(cex) => Ok(VerifyOutcome::Counterexample(cex)),
    }
}

fn verify_rec(
    ctx: &GameContext<'_>,
    strategy: &Strategy,
    p: &Position,
    rounds_left: u32,
    trail: &mut Vec<PlayStep>,
) -> Result<Result<u32, Counterexample>, GameError> {
    let fail = |reason, trail: &[PlayStep], p: &Position| {
        let mut play = trail.to_vec();
        play.push(PlayStep {
            position: p.clone(),
            mv: None,
        });
        Ok(Err(Counterexample { reason, play }))
    };

    if let TerminalStatus::Win(winner) = terminal_status(ctx, p)? {
        if winner == strategy.owner() {
            return Ok(Ok(0));
        }
        return fail(CounterexampleReason::OwnerLoses, trail, p);
    }
    if rounds_left == 0 {
        return fail(CounterexampleReason::RoundLimitExceeded, trail, p);
    }

    let to_move = mover(ctx, p)?;
    let step_into = |mv: Move,
                     trail: &mut Vec<PlayStep>|
     -> Result<Result<u32, Counterexample>, GameError> {
        let next = match apply_move(ctx, p, &mv) {
            Ok(next) => next,
            Err(GameError::IllegalMove { .. }) => {
                let mut play = trail.to_vec();
                play.push(PlayStep {
                    position: p.clone(),
                    mv: Some(mv),
                });
                return Ok(Err(Counterexample {
                    reason: CounterexampleReason::IllegalMove,
                    play,
                }));
            }
            Err(e) => return Err(e),
        };
        trail.push(PlayStep {
            position: p.clone(),
            mv: Some(mv),
        });
        let res = verify_rec(ctx, strategy, &next, rounds_left - 1, trail)?;
        trail.pop();
        Ok(res.map(|bound| bound + 1))
    };

    match to_move {
        None => step_into(Move::Forced, trail),
        Some(player) if player == strategy.owner() => match strategy.get(p) {
            None => fail(CounterexampleReason::StrategyUndefined, trail, p),
            Some(mv) => step_into(mv.clone(), trail),
        },
        Some(_) => {
            let mut bound = 0;
            for mv in legal_moves(ctx, p)? {
                match step_into(mv, trail)? {
                    Ok(b) => bound = bound.max(b),
                    Err(cex) => return Ok(Err(cex)),
                }
            }
            Ok(Ok(bound))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::build::*;
    use crate::ast::RelationSymbol;
    use crate::structure::ElementId;

    fn one_element_with_p(p_holds: bool) -> Structure {
        let mut s = Structure::new(1).unwrap();
        let psym = RelationSymbol::new("P", 1);
        s.declare_symbol(psym.clone());
        if p_holds {
            s = s.insert_tuple(&psym, &[ElementId(0)]).unwrap();
        }
        s
    }

    /// The looping disjunction 1(P(x) | 1), in core syntax.
    fn loop_disjunction() -> Formula {
        labeled(1, or(rel("P", &["x"]), loop_atom(1)))
    }

    fn x_assigned() -> Assignment {
        Assignment::empty().bind(var("x"), ElementId(0))
    }

    #[test]
    fn trivial_existential_is_a_quick_win() {
        let root = exists("x", eq("x", "x"));
        let mut solver = Solver::new(&root, SearchConfig::default());
        let s = Structure::new(3).unwrap();
        let p = solver.start(&s, &Assignment::empty(), Sign::Plus).unwrap();
        assert_eq!(
            solver.bounded_value(&p, Player::Exists, 2).unwrap(),
            BoundedValue::Win
        );
    }

    #[test]
    fn loop_disjunction_with_empty_p_is_unknown_at_any_depth() {
        let root = loop_disjunction();
        let s = one_element_with_p(false);
        let mut solver = Solver::new(&root, SearchConfig::default());
        let p = solver.start(&s, &x_assigned(), Sign::Plus).unwrap();
        for d in [1, 2, 3, 5, 8, 13, 40] {
            assert_eq!(
                solver.bounded_value(&p, Player::Exists, d).unwrap(),
                BoundedValue::Unknown,
                "depth {d}"
            );
            assert_eq!(
                solver.bounded_value(&p, Player::Forall, d).unwrap(),
                BoundedValue::Unknown,
                "depth {d}"
            );
        }
    }

    #[test]
    fn loop_disjunction_with_witness_needs_four_rounds() {
        // label -> negation -> conjunct pick -> negation -> atom: the
        // verifier wins, but only with four transitions of lookahead.
        let root = loop_disjunction();
        let s = one_element_with_p(true);
        let mut solver = Solver::new(&root, SearchConfig::default());
        let p = solver.start(&s, &x_assigned(), Sign::Plus).unwrap();
        assert_eq!(
            solver.bounded_value(&p, Player::Exists, 3).unwrap(),
            BoundedValue::Unknown
        );
        assert_eq!(
            solver.bounded_value(&p, Player::Exists, 4).unwrap(),
            BoundedValue::Win
        );
    }

    #[test]
    fn evaluate_reports_depth_and_verdicts() {
        let root = exists("x", eq("x", "x"));
        let mut solver = Solver::new(&root, SearchConfig::default());
        let s = Structure::new(1).unwrap();
        let (verdict, stats) = solver
            .evaluate(&s, &Assignment::empty(), Sign::Plus)
            .unwrap();
        assert!(matches!(verdict, Verdict::ProvenTrue { .. }));
        assert!(stats.nodes_expanded > 0);
    }

    #[test]
    fn evaluate_loop_matches_three_outcome_analysis() {
        let root = loop_disjunction();
        let config = SearchConfig {
            budget: 100,
            ..SearchConfig::default()
        };

        let empty = one_element_with_p(false);
        let mut solver = Solver::new(&root, config);
        let (v, _) = solver.evaluate(&empty, &x_assigned(), Sign::Plus).unwrap();
        assert_eq!(v, Verdict::Unknown { budget: 100 });
        let (v, _) = solver.evaluate(&empty, &x_assigned(), Sign::Minus).unwrap();
        assert_eq!(v, Verdict::Unknown { budget: 100 });

        let holds = one_element_with_p(true);
        let mut solver = Solver::new(&root, config);
        let (v, _) = solver.evaluate(&holds, &x_assigned(), Sign::Plus).unwrap();
        assert_eq!(v, Verdict::ProvenTrue { depth: 4 });
        let (v, _) = solver.evaluate(&holds, &x_assigned(), Sign::Minus).unwrap();
        assert_eq!(v, Verdict::ProvenFalse { depth: 4 });
    }

    #[test]
    fn tarski_examples() {
        let s = one_element_with_p(false);
        let f = Assignment::empty();
        let some_p = exists("x", rel("P", &["x"]));
        assert!(!eval_fo_tarski(&s, &f, &some_p).unwrap());

        let s = one_element_with_p(true);
        assert!(eval_fo_tarski(&s, &f, &some_p).unwrap());

        // ~exists x ~(x = x) holds in every model.
        let top = not(exists("x", not(eq("x", "x"))));
        assert!(eval_fo_tarski(&s, &f, &top).unwrap());

        assert!(matches!(
            eval_fo_tarski(&s, &f, &loop_atom(1)),
            Err(TarskiError::NotFoFragment)
        ));
    }

    #[test]
    fn extract_strategy_wins_and_verifies() {
        let root = loop_disjunction();
        let s = one_element_with_p(true);
        let mut solver = Solver::new(&root, SearchConfig::default());
        let p = solver.start(&s, &x_assigned(), Sign::Plus).unwrap();
        let strategy = solver
            .extract_strategy(&p, Player::Exists, 6)
            .unwrap()
            .expect("verifier wins");
        // The verifier's only choice is the disjunct pick.
        assert_eq!(strategy.len(), 1);
        match verify_strategy(solver.context(), &strategy, &p, 6).unwrap() {
            VerifyOutcome::Verified { bound } => assert_eq!(bound, 4),
            other => panic!("expected verified, got {other:?}"),
        }
    }

    #[test]
    fn losing_side_has_no_strategy() {
        let root = loop_disjunction();
        let s = one_element_with_p(true);
        let mut solver = Solver::new(&root, SearchConfig::default());
        let p = solver.start(&s, &x_assigned(), Sign::Plus).unwrap();
        assert!(solver
            .extract_strategy(&p, Player::Forall, 10)
            .unwrap()
            .is_none());
    }

    #[test]
    fn looping_strategy_is_caught_by_the_round_limit() {
        // With P empty, picking the loop side forever never wins; the
        // verifier's strategy of always jumping is cut off and reported.
        let root = loop_disjunction();
        let s = one_element_with_p(false);
        let solver = Solver::new(&root, SearchConfig::default());
        let p = initial_position(&s, &x_assigned(), Sign::Plus, solver.context()).unwrap();

        let mut strategy = Strategy::new(Player::Exists);
        // Reach the conjunction under the negation and always pick the
        // loop side, then always jump back to the root label.
        let ctx = solver.context();
        let after_label = apply_move(ctx, &p, &Move::Forced).unwrap();
        let conj = apply_move(ctx, &after_label, &Move::Forced).unwrap();
        strategy.insert(&conj, Move::PickConjunct(crate::game::Side::Right));
        let negated = apply_move(ctx, &conj, &Move::PickConjunct(crate::game::Side::Right)).unwrap();
        let at_loop = apply_move(ctx, &negated, &Move::Forced).unwrap();
        strategy.insert(&at_loop, Move::JumpTo(crate::ast::FormulaPath::root()));

        match verify_strategy(ctx, &strategy, &p, 50).unwrap() {
            VerifyOutcome::Counterexample(cex) => {
                assert_eq!(cex.reason, CounterexampleReason::RoundLimitExceeded);
                assert_eq!(cex.play.len(), 51);
            }
            other => panic!("expected counterexample, got {other:?}"),
        }
    }

    #[test]
    fn strategy_losing_at_an_atom_is_a_counterexample() {
        let root = rel("P", &["x"]);
        let s = one_element_with_p(false);
        let solver = Solver::new(&root, SearchConfig::default());
        let p = initial_position(&s, &x_assigned(), Sign::Plus, solver.context()).unwrap();
        let strategy = Strategy::new(Player::Exists);
        match verify_strategy(solver.context(), &strategy, &p, 5).unwrap() {
            VerifyOutcome::Counterexample(cex) => {
                assert_eq!(cex.reason, CounterexampleReason::OwnerLoses);
            }
            other => panic!("expected counterexample, got {other:?}"),
        }
    }

    #[test]
    fn undefined_strategy_position_is_reported() {
        let root = exists("x", eq("x", "x"));
        let s = Structure::new(1).unwrap();
        let solver = Solver::new(&root, SearchConfig::default());
        let p = initial_position(&s, &Assignment::empty(), Sign::Plus, solver.context()).unwrap();
        let strategy = Strategy::new(Player::Exists);
        match verify_strategy(solver.context(), &strategy, &p, 5).unwrap() {
            VerifyOutcome::Counterexample(cex) => {
                assert_eq!(cex.reason, CounterexampleReason::StrategyUndefined);
            }
            other => panic!("expected counterexample, got {other:?}"),
        }
    }

    #[test]
    fn memo_on_and_off_agree() {
        let root = loop_disjunction();
        let s = one_element_with_p(true);
        let config_on = SearchConfig {
            budget: 50,
            ..SearchConfig::default()
        };
        let config_off = SearchConfig {
            memo: false,
            ..config_on
        };
        let mut with_memo = Solver::new(&root, config_on);
        let mut without = Solver::new(&root, config_off);
        let (v1, _) = with_memo.evaluate(&s, &x_assigned(), Sign::Plus).unwrap();
        let (v2, _) = without.evaluate(&s, &x_assigned(), Sign::Plus).unwrap();
        assert_eq!(v1, v2);
    }

    #[test]
    fn deepening_levels_end_at_the_budget() {
        assert_eq!(deepening_levels(5, DeepeningStep::Arithmetic(1)), alloc::vec![1, 2, 3, 4, 5]);
        assert_eq!(deepening_levels(5, DeepeningStep::Arithmetic(2)), alloc::vec![1, 3, 5]);
        assert_eq!(deepening_levels(6, DeepeningStep::Arithmetic(2)), alloc::vec![1, 3, 5, 6]);
        assert_eq!(deepening_levels(20, DeepeningStep::Geometric), alloc::vec![1, 2, 4, 8, 16, 20]);
        assert_eq!(deepening_levels(1, DeepeningStep::Geometric), alloc::vec![1]);
    }
}
