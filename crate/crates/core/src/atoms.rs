//! Finite world spaces, propositional formulas and gambles.
//!
//! A space is an ordered list of worlds, each a truth assignment to an
//! ordered list of propositions. By default the worlds are all `2^N` atoms
//! over the propositions; explicit models may use any nonempty subset.
//! Worlds are addressed by index and sets of worlds are 64-bit masks.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Largest number of worlds a space may hold (one bit per world in [`WorldSet`]).
pub const MAX_WORLDS: usize = 64;

/// A set of worlds of some space, as a bitmask over world indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct WorldSet(u64);

impl WorldSet {
    pub const EMPTY: WorldSet = WorldSet(0);

    pub fn from_bits(bits: u64) -> Self {
        WorldSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// All worlds of an `n`-world space.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_WORLDS);
        if n == 64 {
            WorldSet(u64::MAX)
        } else {
            WorldSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        WorldSet(1u64 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        it.into_iter().fold(WorldSet::EMPTY, |s, i| s.with(i))
    }

    pub fn with(self, i: usize) -> Self {
        WorldSet(self.0 | (1u64 << i))
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 & (1u64 << i) != 0
    }

    pub fn union(self, o: Self) -> Self {
        WorldSet(self.0 | o.0)
    }

    pub fn intersection(self, o: Self) -> Self {
        WorldSet(self.0 & o.0)
    }

    pub fn difference(self, o: Self) -> Self {
        WorldSet(self.0 & !o.0)
    }

    /// Complement relative to an `n`-world space.
    pub fn complement(self, n: usize) -> Self {
        WorldSet(!self.0 & WorldSet::full(n).0)
    }

    pub fn is_subset_of(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

impl fmt::Display for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "#{i}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct World {
    pub id: String,
    pub assign: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomSpace {
    props: Vec<String>,
    worlds: Vec<World>,
}

impl AtomSpace {
    /// The `2^N` atoms over `props`. World `j` assigns proposition `i` the
    /// value of bit `i` of `j`; ids are `w1..w{2^N}`.
    pub fn full<S: Into<String>>(props: impl IntoIterator<Item = S>) -> Result<Self> {
        let props: Vec<String> = props.into_iter().map(Into::into).collect();
        check_props(&props)?;
        if props.len() > 6 {
            return Err(Error::TooManyWorlds(1usize << props.len().min(63)));
        }
        let n = props.len();
        let worlds = (0..1usize << n)
            .map(|j| World {
                id: format!("w{}", j + 1),
                assign: (0..n).map(|i| j >> i & 1 == 1).collect(),
            })
            .collect();
        Ok(AtomSpace { props, worlds })
    }

    /// A space with explicitly listed worlds.
    pub fn with_worlds<S: Into<String>>(
        props: impl IntoIterator<Item = S>,
        worlds: Vec<World>,
    ) -> Result<Self> {
        let props: Vec<String> = props.into_iter().map(Into::into).collect();
        check_props(&props)?;
        if worlds.is_empty() {
            return Err(Error::InvalidSpace("a space needs at least one world".into()));
        }
        if worlds.len() > MAX_WORLDS {
            return Err(Error::TooManyWorlds(worlds.len()));
        }
        let mut ids = BTreeSet::new();
        let mut assigns = BTreeSet::new();
        for w in &worlds {
            if w.assign.len() != props.len() {
                return Err(Error::InvalidSpace(format!(
                    "world `{}` assigns {} propositions, expected {}",
                    w.id,
                    w.assign.len(),
                    props.len()
                )));
            }
            if !ids.insert(w.id.clone()) {
                return Err(Error::InvalidSpace(format!("duplicate world id `{}`", w.id)));
            }
            if !assigns.insert(w.assign.clone()) {
                return Err(Error::InvalidSpace(format!(
                    "world `{}` repeats the truth assignment of another world",
                    w.id
                )));
            }
        }
        Ok(AtomSpace { props, worlds })
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn worlds(&self) -> &[World] {
        &self.worlds
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }

    pub fn all(&self) -> WorldSet {
        WorldSet::full(self.worlds.len())
    }

    pub fn prop_index(&self, name: &str) -> Option<usize> {
        self.props.iter().position(|p| p == name)
    }

    pub fn world_index(&self, id: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w.id == id)
    }

    /// The sub-space keeping only the worlds in `keep`, in order.
    pub fn restrict(&self, keep: WorldSet) -> Result<Self> {
        let worlds = keep.iter().map(|i| self.worlds[i].clone()).collect();
        AtomSpace::with_worlds(self.props.clone(), worlds)
    }

    /// Conjunction of literals describing world `w`.
    pub fn world_formula(&self, w: usize) -> PropFormula {
        let lits = self.props.iter().zip(&self.worlds[w].assign).map(|(p, &v)| {
            let atom = PropFormula::prop(p);
            if v {
                atom
            } else {
                PropFormula::not(atom)
            }
        });
        lits.reduce(PropFormula::and).unwrap_or(PropFormula::True)
    }

    fn check_world(&self, w: usize) -> Result<()> {
        if w < self.worlds.len() {
            Ok(())
        } else {
            Err(Error::ForeignWorld { index: w, len: self.worlds.len() })
        }
    }

    fn check_set(&self, u: WorldSet) -> Result<()> {
        if u.is_subset_of(self.all()) {
            Ok(())
        } else {
            let index = u.difference(self.all()).iter().next().unwrap_or(0);
            Err(Error::ForeignWorld { index, len: self.worlds.len() })
        }
    }
}

fn check_props(props: &[String]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for p in props {
        if !is_identifier(p) {
            return Err(Error::InvalidSpace(format!("`{p}` is not a proposition name")));
        }
        if !seen.insert(p) {
            return Err(Error::InvalidSpace(format!("proposition `{p}` listed twice")));
        }
    }
    Ok(())
}

/// `[a-z][a-zA-Z0-9_]*`, excluding the literals `true` and `false`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && s != "true"
        && s != "false"
}

/// Propositional formula over named propositions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropFormula {
    True,
    False,
    Prop(String),
    Not(Box<PropFormula>),
    And(Box<PropFormula>, Box<PropFormula>),
    Or(Box<PropFormula>, Box<PropFormula>),
    Implies(Box<PropFormula>, Box<PropFormula>),
}

impl PropFormula {
    pub fn prop(name: impl Into<String>) -> Self {
        PropFormula::Prop(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Self) -> Self {
        PropFormula::Not(Box::new(a))
    }

    pub fn and(a: Self, b: Self) -> Self {
        PropFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Self, b: Self) -> Self {
        PropFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Self, b: Self) -> Self {
        PropFormula::Implies(Box::new(a), Box::new(b))
    }

    /// Disjunction of a nonempty list.
    pub fn or_all(items: impl IntoIterator<Item = Self>) -> Option<Self> {
        items.into_iter().reduce(PropFormula::or)
    }

    /// Conjunction of a nonempty list.
    pub fn and_all(items: impl IntoIterator<Item = Self>) -> Option<Self> {
        items.into_iter().reduce(PropFormula::and)
    }

    pub fn collect_props(&self, out: &mut BTreeSet<String>) {
        match self {
            PropFormula::True | PropFormula::False => {}
            PropFormula::Prop(p) => {
                out.insert(p.clone());
            }
            PropFormula::Not(a) => a.collect_props(out),
            PropFormula::And(a, b) | PropFormula::Or(a, b) | PropFormula::Implies(a, b) => {
                a.collect_props(out);
                b.collect_props(out);
            }
        }
    }

    pub fn props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_props(&mut out);
        out
    }
}

/// Truth value of `phi` at world `w` of `space`.
pub fn eval_prop(phi: &PropFormula, space: &AtomSpace, w: usize) -> Result<bool> {
    space.check_world(w)?;
    eval_in(phi, space, &space.worlds[w].assign)
}

fn eval_in(phi: &PropFormula, space: &AtomSpace, assign: &[bool]) -> Result<bool> {
    Ok(match phi {
        PropFormula::True => true,
        PropFormula::False => false,
        PropFormula::Prop(p) => {
            let i = space
                .prop_index(p)
                .ok_or_else(|| Error::UnknownProposition(p.clone()))?;
            assign[i]
        }
        PropFormula::Not(a) => !eval_in(a, space, assign)?,
        PropFormula::And(a, b) => eval_in(a, space, assign)? & eval_in(b, space, assign)?,
        PropFormula::Or(a, b) => eval_in(a, space, assign)? | eval_in(b, space, assign)?,
        PropFormula::Implies(a, b) => !eval_in(a, space, assign)? | eval_in(b, space, assign)?,
    })
}

/// The worlds of `space` at which `phi` is true.
pub fn extension(phi: &PropFormula, space: &AtomSpace) -> Result<WorldSet> {
    let mut set = WorldSet::EMPTY;
    for (i, w) in space.worlds.iter().enumerate() {
        if eval_in(phi, space, &w.assign)? {
            set = set.with(i);
        }
    }
    Ok(set)
}

/// A propositional gamble `b1*phi1 + ... + bn*phin`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SyntacticGamble {
    pub terms: Vec<(Rational, PropFormula)>,
}

impl SyntacticGamble {
    pub fn new(terms: Vec<(Rational, PropFormula)>) -> Self {
        SyntacticGamble { terms }
    }

    /// The gamble `1*phi`.
    pub fn formula(phi: PropFormula) -> Self {
        SyntacticGamble { terms: vec![(crate::rational::one(), phi)] }
    }

    pub fn constant(c: Rational) -> Self {
        SyntacticGamble { terms: vec![(c, PropFormula::True)] }
    }

    pub fn plus(&self, other: &SyntacticGamble) -> SyntacticGamble {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        SyntacticGamble { terms }
    }

    pub fn scaled(&self, a: &Rational) -> SyntacticGamble {
        SyntacticGamble {
            terms: self.terms.iter().map(|(c, phi)| (c * a, phi.clone())).collect(),
        }
    }

    pub fn collect_props(&self, out: &mut BTreeSet<String>) {
        for (_, phi) in &self.terms {
            phi.collect_props(out);
        }
    }
}

/// The gamble `w ↦ Σ { b_i : phi_i true at w }`.
pub fn realize_gamble(g: &SyntacticGamble, space: &Arc<AtomSpace>) -> Result<Gamble> {
    let mut values = vec![Rational::zero(); space.len()];
    for (b, phi) in &g.terms {
        let ext = extension(phi, space)?;
        for w in ext.iter() {
            values[w] += b;
        }
    }
    Ok(Gamble { space: space.clone(), values })
}

/// A rational-valued function on the worlds of a space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gamble {
    space: Arc<AtomSpace>,
    values: Vec<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineMode {
    Add,
    Min,
    Max,
}

impl Gamble {
    pub fn new(space: &Arc<AtomSpace>, values: Vec<Rational>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::LengthMismatch { expected: space.len(), found: values.len() });
        }
        Ok(Gamble { space: space.clone(), values })
    }

    pub fn constant(space: &Arc<AtomSpace>, c: Rational) -> Self {
        Gamble { space: space.clone(), values: vec![c; space.len()] }
    }

    pub fn space(&self) -> &Arc<AtomSpace> {
        &self.space
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, w: usize) -> &Rational {
        &self.values[w]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn neg(&self) -> Gamble {
        scale_shift(&(-crate::rational::one()), self, &Rational::zero())
    }

    /// Distinct values, ascending.
    pub fn distinct_values(&self) -> Vec<Rational> {
        let set: BTreeSet<&Rational> = self.values.iter().collect();
        set.into_iter().cloned().collect()
    }

    /// Minimum over a nonempty set of worlds.
    pub fn min_over(&self, u: WorldSet) -> Option<Rational> {
        u.iter().map(|w| &self.values[w]).min().cloned()
    }

    pub fn max_over(&self, u: WorldSet) -> Option<Rational> {
        u.iter().map(|w| &self.values[w]).max().cloned()
    }

    /// `{w : X(w) > t}`.
    pub fn above(&self, t: &Rational) -> WorldSet {
        WorldSet::from_indices((0..self.values.len()).filter(|&w| &self.values[w] > t))
    }

    pub fn same_space(&self, other: &Gamble) -> bool {
        same_space(&self.space, &other.space)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }
}

pub fn same_space(a: &Arc<AtomSpace>, b: &Arc<AtomSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Pointwise sum, minimum or maximum.
pub fn combine(mode: CombineMode, x: &Gamble, y: &Gamble) -> Result<Gamble> {
    if !x.same_space(y) {
        return Err(Error::SpaceMismatch);
    }
    let values = x
        .values
        .iter()
        .zip(&y.values)
        .map(|(a, b)| match mode {
            CombineMode::Add => a + b,
            CombineMode::Min => a.min(b).clone(),
            CombineMode::Max => a.max(b).clone(),
        })
        .collect();
    Ok(Gamble { space: x.space.clone(), values })
}

/// Pointwise `a*X + b`.
pub fn scale_shift(a: &Rational, x: &Gamble, b: &Rational) -> Gamble {
    Gamble {
        space: x.space.clone(),
        values: x.values.iter().map(|v| a * v + b).collect(),
    }
}

/// No pair of worlds is ordered strictly oppositely by `x` and `y`.
pub fn is_comonotonic(x: &Gamble, y: &Gamble) -> Result<bool> {
    if !x.same_space(y) {
        return Err(Error::SpaceMismatch);
    }
    let n = x.values.len();
    for w in 0..n {
        for v in w + 1..n {
            let dx = &x.values[w] - &x.values[v];
            let dy = &y.values[w] - &y.values[v];
            if (dx * dy).is_negative() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The indicator `X_U`.
pub fn indicator(u: WorldSet, space: &Arc<AtomSpace>) -> Result<Gamble> {
    space.check_set(u)?;
    let values = (0..space.len())
        .map(|w| if u.contains(w) { crate::rational::one() } else { Rational::zero() })
        .collect();
    Ok(Gamble { space: space.clone(), values })
}
