//! Generator sets, reduced words and the two ways of evaluating a word.
//!
//! A word `g_{j1} g_{j2} … g_{jk}` can be evaluated *stationarily*, where
//! every letter rotates about its generator's original axis, or
//! *peripatetically*, where letter `t` rotates about the image of its axis
//! under the product of the first `t - 1` letters: `P(f ⋆ g_i) = (Pf)(f g_i)`.
//! The peripatetic product of a word equals the stationary product of the
//! reversed word; [`transport_isomorphism`] is that reversal, and the two
//! evaluators here are written independently so the identity is a real
//! cross-check.
//!
//! Generator indices are 0-based in code and 1-based in the text form
//! (`1^2,2^-1,1^3`).

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geometry::{
    classify_angle, make_rotation_rad, Angle, AngleClass, Axis, Dim, DirectedIsometry, GeometryError, Vec3,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WordError {
    #[error("generator list is empty")]
    Empty,
    #[error("generators {first} and {second} share an axis")]
    DuplicateAxis { first: usize, second: usize },
    #[error("generator {0} is the identity rotation")]
    TrivialGenerator(usize),
    #[error("generator {index} has a {found}-dimensional axis in a {expected}-dimensional set")]
    AxisDimension { index: usize, expected: usize, found: usize },
    #[error("generator index {index} out of range for {len} generators")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("cannot parse word `{0}`")]
    Parse(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub axis: Axis,
    pub angle: Angle,
    pub class: AngleClass,
}

/// The generator rotations `R = {r_i}`, at most one per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSet {
    dim: Dim,
    gens: Vec<Generator>,
}

impl GeneratorSet {
    pub fn new(dim: Dim, specs: Vec<(Axis, Angle)>) -> Result<Self, WordError> {
        if specs.is_empty() {
            return Err(WordError::Empty);
        }
        let mut gens: Vec<Generator> = Vec::with_capacity(specs.len());
        for (index, (axis, angle)) in specs.into_iter().enumerate() {
            if axis.dim() != dim {
                return Err(WordError::AxisDimension {
                    index,
                    expected: dim.get(),
                    found: axis.dim().get(),
                });
            }
            if let Some(first) = gens.iter().position(|g| g.axis.same_point_set(&axis)) {
                return Err(WordError::DuplicateAxis { first, second: index });
            }
            let class = classify_angle(&angle);
            if class == (AngleClass::Rational { order: 1 }) {
                return Err(WordError::TrivialGenerator(index));
            }
            gens.push(Generator { axis, angle, class });
        }
        Ok(GeneratorSet { dim, gens })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&Generator> {
        self.gens.get(index)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn axes(&self) -> Vec<Axis> {
        self.gens.iter().map(|g| g.axis).collect()
    }

    fn check(&self, index: usize) -> Result<&Generator, WordError> {
        self.gens.get(index).ok_or(WordError::IndexOutOfRange {
            index,
            len: self.gens.len(),
        })
    }

    /// Balanced residue in `(-n/2, n/2]` for finite order `n`; unchanged
    /// otherwise.
    pub fn normalize_exponent(&self, index: usize, exp: i64) -> i64 {
        match self.gens.get(index).and_then(|g| g.class.order()) {
            Some(n) => balanced_residue(exp, n as i64),
            None => exp,
        }
    }

    /// Every exponent a breadth-first enumeration should try for this
    /// generator: the nonzero residues for finite order, otherwise
    /// `±1..=±max_exp`. Ascending.
    pub fn exponent_range(&self, index: usize, max_exp: i64) -> Vec<i64> {
        match self.gens[index].class.order() {
            Some(n) => {
                let n = n as i64;
                (-(n - 1) / 2..=n / 2).filter(|&e| e != 0).collect()
            }
            None => (-max_exp..=max_exp).filter(|&e| e != 0).collect(),
        }
    }

    /// `r_i^e` about an arbitrary axis position (the peripatetic step rotates
    /// about a transported axis).
    pub fn rotation_about(&self, index: usize, exp: i64, axis: &Axis) -> DirectedIsometry {
        make_rotation_rad(axis, self.gens[index].angle.times(exp))
    }

    /// `r_i^e` about the generator's own axis.
    pub fn power(&self, index: usize, exp: i64) -> Result<DirectedIsometry, WordError> {
        let g = self.check(index)?;
        Ok(make_rotation_rad(&g.axis, g.angle.times(exp)))
    }

    pub fn reduce(&self, raw: &[Letter]) -> Word {
        reduce(self, raw)
    }
}

pub fn make_generators(dim: Dim, specs: Vec<(Axis, Angle)>) -> Result<GeneratorSet, WordError> {
    GeneratorSet::new(dim, specs)
}

fn balanced_residue(exp: i64, n: i64) -> i64 {
    let r = exp.rem_euclid(n);
    if 2 * r > n {
        r - n
    } else {
        r
    }
}

/// One factor `r_gen^exp`. Raw letters may carry a zero exponent; reduced
/// words never do.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub exp: i64,
}

impl Letter {
    pub fn new(gen: usize, exp: i64) -> Self {
        Letter { gen, exp }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.gen + 1, self.exp)
    }
}

/// A reduced word: no two adjacent letters share a generator, no zero
/// exponents, finite-order exponents in balanced residue form. The empty word
/// is the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn last_gen(&self) -> Option<usize> {
        self.letters.last().map(|l| l.gen)
    }

    /// Appends a letter whose generator differs from the last one and whose
    /// exponent is already normalized. Used by enumerators that maintain the
    /// invariants themselves.
    pub(crate) fn pushed(&self, letter: Letter) -> Word {
        debug_assert!(letter.exp != 0 && self.last_gen() != Some(letter.gen));
        let mut letters = Vec::with_capacity(self.letters.len() + 1);
        letters.extend_from_slice(&self.letters);
        letters.push(letter);
        Word { letters }
    }

    pub fn reversed(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().copied().collect(),
        }
    }

    /// Checks the reduced-word invariants against `gens`.
    pub fn is_reduced_for(&self, gens: &GeneratorSet) -> bool {
        self.letters.iter().all(|l| {
            l.exp != 0 && l.gen < gens.len() && gens.normalize_exponent(l.gen, l.exp) == l.exp
        }) && self.letters.windows(2).all(|w| w[0].gen != w[1].gen)
    }

    /// Parses `1^2,2^-1,1^3` (1-based indices, whitespace ignored) and
    /// reduces the result. An empty string is the empty word.
    pub fn parse(gens: &GeneratorSet, text: &str) -> Result<Word, WordError> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Ok(Word::empty());
        }
        let bad = || WordError::Parse(text.to_string());
        let mut raw = Vec::new();
        for token in compact.split(',') {
            let (i, e) = token.split_once('^').ok_or_else(bad)?;
            let i: usize = i.parse().map_err(|_| bad())?;
            let e: i64 = e.parse().map_err(|_| bad())?;
            if i == 0 || i > gens.len() {
                return Err(WordError::IndexOutOfRange { index: i, len: gens.len() });
            }
            if e == 0 {
                return Err(bad());
            }
            raw.push(Letter::new(i - 1, e));
        }
        Ok(reduce(gens, &raw))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Merges adjacent letters on the same generator, reduces exponents modulo
/// finite orders and drops zero exponents, cascading until nothing changes.
pub fn reduce(gens: &GeneratorSet, raw: &[Letter]) -> Word {
    let mut stack: Vec<Letter> = Vec::with_capacity(raw.len());
    for l in raw {
        let e = gens.normalize_exponent(l.gen, l.exp);
        if e == 0 {
            continue;
        }
        match stack.last_mut() {
            Some(top) if top.gen == l.gen => {
                let merged = gens.normalize_exponent(l.gen, top.exp.saturating_add(e));
                if merged == 0 {
                    stack.pop();
                } else {
                    top.exp = merged;
                }
            }
            _ => stack.push(Letter::new(l.gen, e)),
        }
    }
    Word { letters: stack }
}

/// Left-to-right product with every generator rotating about its fixed axis.
pub fn stationary_eval(gens: &GeneratorSet, w: &Word) -> Result<DirectedIsometry, WordError> {
    let mut total = DirectedIsometry::identity(gens.dim());
    for l in w.letters() {
        total = total.then(&gens.power(l.gen, l.exp)?)?;
    }
    Ok(total)
}

/// Running state of the peripatetic algorithm: the product so far and the
/// current positions `A_j f` of every generator axis.
#[derive(Debug, Clone, PartialEq)]
pub struct PeripateticState {
    pub total: DirectedIsometry,
    pub axes: Vec<Axis>,
}

impl PeripateticState {
    pub fn new(gens: &GeneratorSet) -> Self {
        PeripateticState {
            total: DirectedIsometry::identity(gens.dim()),
            axes: gens.axes(),
        }
    }

    /// Applies one letter: rotate about the current position of its axis,
    /// then carry every axis along. Returns the rotation used.
    pub fn step(&mut self, gens: &GeneratorSet, letter: Letter) -> Result<DirectedIsometry, WordError> {
        gens.check(letter.gen)?;
        let r = gens.rotation_about(letter.gen, letter.exp, &self.axes[letter.gen]);
        self.total = self.total.then(&r)?;
        for axis in &mut self.axes {
            *axis = r.transform_axis_unchecked(axis);
        }
        Ok(r)
    }
}

/// Step-by-step record of a peripatetic evaluation. `axis_history[t]` holds
/// every axis after `t` letters (so `axis_history[0]` is the original set).
#[derive(Debug, Clone, PartialEq)]
pub struct PeripateticTrace {
    pub total: DirectedIsometry,
    pub axis_history: Vec<Vec<Axis>>,
    pub point_history: Option<Vec<Vec3>>,
}

pub fn peripatetic_eval(gens: &GeneratorSet, w: &Word) -> Result<PeripateticTrace, WordError> {
    peripatetic_eval_tracking(gens, w, None)
}

/// Like [`peripatetic_eval`], also recording the images of `point` after
/// every step (`point_history[0]` is the point itself).
pub fn peripatetic_eval_tracking(
    gens: &GeneratorSet,
    w: &Word,
    point: Option<Vec3>,
) -> Result<PeripateticTrace, WordError> {
    let mut state = PeripateticState::new(gens);
    let mut axis_history = Vec::with_capacity(w.len() + 1);
    axis_history.push(state.axes.clone());
    let mut point_history = point.map(|p| {
        let mut v = Vec::with_capacity(w.len() + 1);
        v.push(p);
        v
    });
    for &l in w.letters() {
        let r = state.step(gens, l)?;
        axis_history.push(state.axes.clone());
        if let Some(h) = point_history.as_mut() {
            let last = *h.last().expect("history starts non-empty");
            h.push(r.apply(&last));
        }
    }
    Ok(PeripateticTrace {
        total: state.total,
        axis_history,
        point_history,
    })
}

/// The isomorphism `S(R) → W(R)` on words: letter reversal. The peripatetic
/// value of `transport_isomorphism(w)` is the stationary value of `w`, and
/// vice versa.
pub fn transport_isomorphism(w: &Word) -> Word {
    w.reversed()
}

/// Deterministic sampler of reduced words.
#[derive(Debug, Clone)]
pub struct WordSampler {
    rng: ChaCha8Rng,
}

impl WordSampler {
    pub fn new(seed: u64) -> Self {
        WordSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Length uniform in `0..=max_len`, then each letter uniform over the
    /// generators other than the previous one and over the admissible
    /// exponents with `|e| ≤ max_exp`.
    pub fn sample(&mut self, gens: &GeneratorSet, max_len: usize, max_exp: i64) -> Word {
        let max_exp = max_exp.max(1);
        let mut len = self.rng.random_range(0..=max_len);
        if gens.len() == 1 {
            len = len.min(1);
        }
        let mut letters: Vec<Letter> = Vec::with_capacity(len);
        for _ in 0..len {
            let prev = letters.last().map(|l| l.gen);
            let choices = gens.len() - usize::from(prev.is_some());
            let mut gen = self.rng.random_range(0..choices);
            if let Some(p) = prev {
                if gen >= p {
                    gen += 1;
                }
            }
            let exps: Vec<i64> = gens
                .exponent_range(gen, max_exp)
                .into_iter()
                .filter(|e| e.abs() <= max_exp)
                .collect();
            let exp = exps[self.rng.random_range(0..exps.len())];
            letters.push(Letter::new(gen, exp));
        }
        Word { letters }
    }
}

pub fn random_reduced_word(gens: &GeneratorSet, max_len: usize, max_exp: i64, seed: u64) -> Word {
    WordSampler::new(seed).sample(gens, max_len, max_exp)
}
