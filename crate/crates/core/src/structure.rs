//! Finite relational structures, assignments, the model-mutation
//! operations used by the game, word models, and the bitstring encoding
//! of structures.
//!
//! Structures and assignments are immutable values: every mutation
//! operation returns a fresh value and leaves its input untouched, so
//! positions can be snapshotted, hashed and compared freely.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::ast::{RelationSymbol, RelationVariable, VariableId, Vocabulary};

/// An element of a structure's domain. Fresh points are allocated as
/// `max(domain) + 1`, so ids stay small and printable.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ElementId(pub u64);

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub type Tuple = Vec<ElementId>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum StructureError {
    EmptyDomain,
    TupleOutOfDomain {
        symbol: String,
        tuple: Tuple,
    },
    ArityMismatch {
        symbol: String,
        arity: usize,
        tuple_len: usize,
    },
    UndeclaredSymbol(String),
    ElementOutOfDomain(ElementId),
}

impl fmt::Display for StructureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructureError::EmptyDomain => write!(f, "structures must have a nonempty domain"),
            StructureError::TupleOutOfDomain { symbol, tuple } => {
                write!(f, "tuple {} for `{symbol}` not within the domain", fmt_tuple(tuple))
            }
            StructureError::ArityMismatch {
                symbol,
                arity,
                tuple_len,
            } => write!(
                f,
                "`{symbol}` has arity {arity} but was given a {tuple_len}-tuple"
            ),
            StructureError::UndeclaredSymbol(name) => {
                write!(f, "relation symbol `{name}` not interpreted by this structure")
            }
            StructureError::ElementOutOfDomain(e) => {
                write!(f, "element {e} is not in the domain")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for StructureError {}

fn fmt_tuple(t: &[ElementId]) -> String {
    let mut s = String::from("(");
    for (i, e) in t.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&alloc::format!("{e}"));
    }
    s.push(')');
    s
}

/// A finite relational structure: a nonempty domain plus an
/// interpretation (a finite tuple set) for every symbol it declares.
/// Storage is canonically sorted, so equality, ordering and hashing are
/// deterministic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Structure {
    domain: BTreeSet<ElementId>,
    interp: BTreeMap<RelationSymbol, BTreeSet<Tuple>>,
}

impl Structure {
    /// A structure with domain `{0, .., n-1}` and no relation symbols.
    pub fn new(n: u64) -> Result<Self, StructureError> {
        if n == 0 {
            return Err(StructureError::EmptyDomain);
        }
        Ok(Structure {
            domain: (0..n).map(ElementId).collect(),
            interp: BTreeMap::new(),
        })
    }

    pub fn domain(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.domain.iter().copied()
    }

    pub fn domain_size(&self) -> usize {
        self.domain.len()
    }

    pub fn contains(&self, e: ElementId) -> bool {
        self.domain.contains(&e)
    }

    /// Declare a symbol with an empty interpretation; keeps an existing
    /// interpretation if the symbol is already present.
    pub fn declare_symbol(&mut self, symbol: RelationSymbol) {
        self.interp.entry(symbol).or_default();
    }

    pub fn symbols(&self) -> impl Iterator<Item = &RelationSymbol> {
        self.interp.keys()
    }

    pub fn vocabulary(&self) -> Vocabulary {
        self.interp.keys().cloned().collect()
    }

    pub fn tuples(&self, symbol: &RelationSymbol) -> Result<&BTreeSet<Tuple>, StructureError> {
        self.interp
            .get(symbol)
            .ok_or_else(|| StructureError::UndeclaredSymbol(symbol.name.clone()))
    }

    pub fn has_tuple(&self, symbol: &RelationSymbol, tuple: &[ElementId]) -> bool {
        self.interp
            .get(symbol)
            .map(|set| set.contains(tuple))
            .unwrap_or(false)
    }

    fn check_tuple(&self, symbol: &RelationSymbol, tuple: &[ElementId]) -> Result<(), StructureError> {
        if tuple.len() != symbol.arity {
            return Err(StructureError::ArityMismatch {
                symbol: symbol.name.clone(),
                arity: symbol.arity,
                tuple_len: tuple.len(),
            });
        }
        if tuple.iter().any(|e| !self.domain.contains(e)) {
            return Err(StructureError::TupleOutOfDomain {
                symbol: symbol.name.clone(),
                tuple: tuple.to_vec(),
            });
        }
        Ok(())
    }

    /// Add a fresh isolated point `max(domain) + 1`. All interpretations
    /// are unchanged.
    pub fn add_fresh_point(&self) -> (Structure, ElementId) {
        let fresh = ElementId(self.domain.iter().next_back().map(|e| e.0 + 1).unwrap_or(0));
        let mut next = self.clone();
        next.domain.insert(fresh);
        (next, fresh)
    }

    /// Insert `tuple` into the interpretation of `symbol`; the domain and
    /// all other relations stay as they were. Inserting a present tuple
    /// is a no-op.
    pub fn insert_tuple(
        &self,
        symbol: &RelationSymbol,
        tuple: &[ElementId],
    ) -> Result<Structure, StructureError> {
        self.check_tuple(symbol, tuple)?;
        let mut next = self.clone();
        next.interp
            .entry(symbol.clone())
            .or_default()
            .insert(tuple.to_vec());
        Ok(next)
    }

    /// Remove `tuple` from the interpretation of `symbol`; deleting an
    /// absent tuple is a no-op, and no domain point is ever removed.
    pub fn delete_tuple(
        &self,
        symbol: &RelationSymbol,
        tuple: &[ElementId],
    ) -> Result<Structure, StructureError> {
        self.check_tuple(symbol, tuple)?;
        let mut next = self.clone();
        next.interp.entry(symbol.clone()).or_default().remove(tuple);
        Ok(next)
    }

    /// Build a structure from explicit parts, checking every invariant.
    pub fn from_parts(
        domain: BTreeSet<ElementId>,
        interp: BTreeMap<RelationSymbol, BTreeSet<Tuple>>,
    ) -> Result<Structure, StructureError> {
        if domain.is_empty() {
            return Err(StructureError::EmptyDomain);
        }
        let s = Structure { domain, interp };
        for (symbol, tuples) in &s.interp {
            for t in tuples {
                s.check_tuple(symbol, t)?;
            }
        }
        Ok(s)
    }

    /// Relabel every element through `map`, which must be a bijection on
    /// the domain. Used by isomorphism-invariance tests.
    pub fn relabeled(&self, map: &BTreeMap<ElementId, ElementId>) -> Result<Structure, StructureError> {
        let mut domain = BTreeSet::new();
        for e in &self.domain {
            domain.insert(*map.get(e).ok_or(StructureError::ElementOutOfDomain(*e))?);
        }
        if domain.len() != self.domain.len() {
            return Err(StructureError::EmptyDomain);
        }
        let mut interp = BTreeMap::new();
        for (symbol, tuples) in &self.interp {
            let mapped = tuples
                .iter()
                .map(|t| t.iter().map(|e| map[e]).collect::<Tuple>())
                .collect();
            interp.insert(symbol.clone(), mapped);
        }
        Structure::from_parts(domain, interp)
    }
}

/// What a simultaneous assignment update can bind.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Binding {
    Individual(VariableId, ElementId),
    /// Replace the value of a relation variable wholesale.
    Relational(RelationVariable, BTreeSet<Tuple>),
}

/// An assignment interprets finitely many individual variables as domain
/// elements and finitely many relation variables as tuple sets.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Assignment {
    individual: BTreeMap<VariableId, ElementId>,
    relational: BTreeMap<RelationVariable, BTreeSet<Tuple>>,
}

impl Assignment {
    pub fn empty() -> Self {
        Assignment::default()
    }

    pub fn get(&self, x: &VariableId) -> Option<ElementId> {
        self.individual.get(x).copied()
    }

    pub fn get_relational(&self, x: &RelationVariable) -> Option<&BTreeSet<Tuple>> {
        self.relational.get(x)
    }

    pub fn individuals(&self) -> impl Iterator<Item = (&VariableId, ElementId)> {
        self.individual.iter().map(|(k, v)| (k, *v))
    }

    pub fn relationals(&self) -> impl Iterator<Item = (&RelationVariable, &BTreeSet<Tuple>)> {
        self.relational.iter()
    }

    /// `f[x -> a]`: pointwise override, leaving every other binding as is.
    pub fn bind(&self, x: VariableId, a: ElementId) -> Assignment {
        let mut next = self.clone();
        next.individual.insert(x, a);
        next
    }

    /// `f[X -> S]`.
    pub fn bind_relational(&self, x: RelationVariable, s: BTreeSet<Tuple>) -> Assignment {
        let mut next = self.clone();
        next.relational.insert(x, s);
        next
    }

    /// Simultaneous override `f[x1 -> b1, .., X -> S]`, checking that all
    /// bound elements and tuples lie within `structure`'s domain and that
    /// tuple lengths match the relation variable's arity.
    pub fn update(
        &self,
        structure: &Structure,
        bindings: &[Binding],
    ) -> Result<Assignment, StructureError> {
        let mut next = self.clone();
        for b in bindings {
            match b {
                Binding::Individual(x, a) => {
                    if !structure.contains(*a) {
                        return Err(StructureError::ElementOutOfDomain(*a));
                    }
                    next.individual.insert(x.clone(), *a);
                }
                Binding::Relational(x, s) => {
                    for t in s {
                        if t.len() != x.arity {
                            return Err(StructureError::ArityMismatch {
                                symbol: alloc::format!("${}", x.name),
                                arity: x.arity,
                                tuple_len: t.len(),
                            });
                        }
                        if t.iter().any(|e| !structure.contains(*e)) {
                            return Err(StructureError::TupleOutOfDomain {
                                symbol: alloc::format!("${}", x.name),
                                tuple: t.clone(),
                            });
                        }
                    }
                    next.relational.insert(x.clone(), s.clone());
                }
            }
        }
        Ok(next)
    }
}

/// A finite word over a finite nonempty alphabet. Symbols are arbitrary
/// tokens, not necessarily single characters.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WordSpec {
    alphabet: Vec<String>,
    word: Vec<String>,
}

impl WordSpec {
    pub fn new(
        alphabet: impl IntoIterator<Item = impl Into<String>>,
        word: impl IntoIterator<Item = impl Into<String>>,
    ) -> Result<Self, String> {
        let alphabet: Vec<String> = alphabet.into_iter().map(Into::into).collect();
        if alphabet.is_empty() {
            return Err(String::from("alphabet must be nonempty"));
        }
        let distinct: BTreeSet<&String> = alphabet.iter().collect();
        if distinct.len() != alphabet.len() {
            return Err(String::from("alphabet symbols must be distinct"));
        }
        let word: Vec<String> = word.into_iter().map(Into::into).collect();
        if let Some(bad) = word.iter().find(|s| !alphabet.contains(s)) {
            return Err(alloc::format!("word symbol `{bad}` not in the alphabet"));
        }
        Ok(WordSpec { alphabet, word })
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn word(&self) -> &[String] {
        &self.word
    }
}

/// The successor symbol of word models.
pub fn succ_symbol() -> RelationSymbol {
    RelationSymbol::new("Succ", 2)
}

/// The letter predicate for an alphabet symbol: `a` becomes `Pa`.
pub fn letter_symbol(letter: &str) -> RelationSymbol {
    RelationSymbol::new(alloc::format!("P{letter}"), 1)
}

/// The word-model vocabulary for an alphabet: `Succ` plus one unary
/// letter predicate per symbol.
pub fn word_vocabulary(alphabet: &[String]) -> Vocabulary {
    core::iter::once(succ_symbol())
        .chain(alphabet.iter().map(|a| letter_symbol(a)))
        .collect()
}

/// The word model of `spec`: domain `{0, .., |w|}`, the canonical
/// successor chain, and letter predicates placing the i-th symbol at
/// element i. Element 0 satisfies no letter predicate; the empty word
/// yields the one-element model.
pub fn word_model(spec: &WordSpec) -> Structure {
    let n = spec.word.len() as u64;
    let mut s = Structure::new(n + 1).expect("nonempty by construction");
    s.declare_symbol(succ_symbol());
    for a in &spec.alphabet {
        s.declare_symbol(letter_symbol(a));
    }
    for i in 0..n {
        s = s
            .insert_tuple(&succ_symbol(), &[ElementId(i), ElementId(i + 1)])
            .expect("in domain");
    }
    for (i, a) in spec.word.iter().enumerate() {
        s = s
            .insert_tuple(&letter_symbol(a), &[ElementId(i as u64 + 1)])
            .expect("in domain");
    }
    s
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EncodeError {
    OrderNotPermutation,
    SymbolsNotVocabulary,
}

impl fmt::Display for EncodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncodeError::OrderNotPermutation => {
                write!(f, "element order must list each domain element exactly once")
            }
            EncodeError::SymbolsNotVocabulary => {
                write!(f, "symbol order must cover the structure's vocabulary exactly once")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for EncodeError {}

/// Encode a structure as the ASCII bitstring
/// `0^{|A|} 1 enc(R1) .. enc(Rp)`, where `enc(R)` has one bit per
/// k-tuple over the ordered domain, enumerated lexicographically with
/// the leftmost component most significant.
pub fn encode(
    structure: &Structure,
    element_order: &[ElementId],
    symbol_order: &[RelationSymbol],
) -> Result<String, EncodeError> {
    let domain: BTreeSet<ElementId> = structure.domain().collect();
    let ordered: BTreeSet<ElementId> = element_order.iter().copied().collect();
    if ordered != domain || element_order.len() != domain.len() {
        return Err(EncodeError::OrderNotPermutation);
    }
    let in_vocab: BTreeSet<&RelationSymbol> = structure.symbols().collect();
    let given: BTreeSet<&RelationSymbol> = symbol_order.iter().collect();
    if in_vocab != given || symbol_order.len() != in_vocab.len() {
        return Err(EncodeError::SymbolsNotVocabulary);
    }

    let n = element_order.len();
    let mut out = String::new();
    for _ in 0..n {
        out.push('0');
    }
    out.push('1');
    for symbol in symbol_order {
        let tuples = structure.tuples(symbol).expect("vocabulary checked");
        // Walk all n^k index tuples in lexicographic order.
        let k = symbol.arity;
        let mut idx = alloc::vec![0usize; k];
        loop {
            let tuple: Tuple = idx.iter().map(|&i| element_order[i]).collect();
            out.push(if tuples.contains(&tuple) { '1' } else { '0' });
            // Advance the mixed-radix counter, last position fastest.
            let mut pos = k;
            loop {
                if pos == 0 {
                    break;
                }
                idx[pos - 1] += 1;
                if idx[pos - 1] < n {
                    break;
                }
                idx[pos - 1] = 0;
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
        }
    }
    Ok(out)
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DecodeError {
    MissingSeparator,
    EmptyDomain,
    BadCharacter(char),
    LengthMismatch { expected: usize, actual: usize },
}

impl fmt::Display for DecodeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecodeError::MissingSeparator => write!(f, "bitstring has no `1` separator"),
            DecodeError::EmptyDomain => write!(f, "bitstring encodes an empty domain"),
            DecodeError::BadCharacter(c) => write!(f, "bitstring contains `{c}`"),
            DecodeError::LengthMismatch { expected, actual } => {
                write!(f, "payload length {actual}, expected {expected}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for DecodeError {}

/// Inverse of [`encode`] for a known symbol list: reads `0^n 1` and then
/// one `n^k`-bit block per symbol, yielding a structure over the domain
/// `{0, .., n-1}` in natural order.
pub fn decode(bits: &str, symbols: &[RelationSymbol]) -> Result<Structure, DecodeError> {
    let mut chars = bits.chars();
    let mut n: usize = 0;
    loop {
        match chars.next() {
            Some('0') => n += 1,
            Some('1') => break,
            Some(c) => return Err(DecodeError::BadCharacter(c)),
            None => return Err(DecodeError::MissingSeparator),
        }
    }
    if n == 0 {
        return Err(DecodeError::EmptyDomain);
    }
    let payload: Vec<char> = chars.collect();
    if let Some(&c) = payload.iter().find(|&&c| c != '0' && c != '1') {
        return Err(DecodeError::BadCharacter(c));
    }
    let expected: usize = symbols.iter().map(|s| n.pow(s.arity as u32)).sum();
    if payload.len() != expected {
        return Err(DecodeError::LengthMismatch {
            expected,
            actual: payload.len(),
        });
    }

    let order: Vec<ElementId> = (0..n as u64).map(ElementId).collect();
    let mut structure = Structure::new(n as u64).expect("n >= 1");
    let mut offset = 0usize;
    for symbol in symbols {
        structure.declare_symbol(symbol.clone());
        let k = symbol.arity;
        let block = n.pow(k as u32);
        for (i, &bit) in payload[offset..offset + block].iter().enumerate() {
            if bit == '1' {
                // Decompose the index back into a tuple, leftmost most
                // significant.
                let mut tuple = alloc::vec![ElementId(0); k];
                let mut rest = i;
                for pos in (0..k).rev() {
                    tuple[pos] = order[rest % n];
                    rest /= n;
                }
                structure = structure
                    .insert_tuple(symbol, &tuple)
                    .expect("decoded tuple in domain");
            }
        }
        offset += block;
    }
    Ok(structure)
}
