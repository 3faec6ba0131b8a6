//! Pairs of permutations `(σ, τ)` in `S_n` up to simultaneous conjugation, filtered by
//! transitivity and by the cycle type of their commutator.

use rayon::prelude::*;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Largest `n` accepted by [`count_classes`].
pub const MAX_DEGREE: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonodromyError {
    #[error("permutations act on {left} and {right} points")]
    SizeMismatch { left: usize, right: usize },
    #[error("n = {0} is too large for exhaustive enumeration (max {MAX_DEGREE})")]
    TooLarge(usize),
    #[error("not a permutation: {0}")]
    Invalid(String),
    #[error("cannot parse cycle type {0:?}")]
    CycleType(String),
}

/// Bijection of `{1..n}`, stored 0-based. Products compose left to right:
/// `(s * t)(x) = t(s(x))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self { images: (0..n as u8).collect() }
    }

    /// From the 1-based images `[s(1), ..., s(n)]`.
    pub fn from_images(images: &[usize]) -> Result<Self, MonodromyError> {
        let n = images.len();
        if n > u8::MAX as usize {
            return Err(MonodromyError::TooLarge(n));
        }
        let mut seen = vec![false; n];
        for &i in images {
            if i == 0 || i > n || std::mem::replace(&mut seen[i - 1], true) {
                return Err(MonodromyError::Invalid(format!("{images:?}")));
            }
        }
        Ok(Self { images: images.iter().map(|&i| (i - 1) as u8).collect() })
    }

    /// The cycle `(c1 c2 ... ck)` in `S_n`, 1-based.
    pub fn cycle(n: usize, points: &[usize]) -> Result<Self, MonodromyError> {
        let mut images: Vec<usize> = (1..=n).collect();
        for (k, &p) in points.iter().enumerate() {
            if p == 0 || p > n {
                return Err(MonodromyError::Invalid(format!("point {p} outside 1..{n}")));
            }
            images[p - 1] = points[(k + 1) % points.len()];
        }
        Self::from_images(&images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 1-based image of the 1-based point `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1] as usize + 1
    }

    /// 1-based images.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&i| i as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    fn check(&self, o: &Self) -> Result<(), MonodromyError> {
        if self.degree() != o.degree() {
            return Err(MonodromyError::SizeMismatch { left: self.degree(), right: o.degree() });
        }
        Ok(())
    }

    /// `self` then `o`.
    pub fn then(&self, o: &Self) -> Result<Self, MonodromyError> {
        self.check(o)?;
        Ok(self.then_unchecked(o))
    }

    fn then_unchecked(&self, o: &Self) -> Self {
        Self { images: self.images.iter().map(|&i| o.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0u8; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v as usize] = i as u8;
        }
        Self { images }
    }

    /// `g s g^-1` as a function: relabels each point `i` as `g(i)`.
    pub fn conjugate_by(&self, g: &Self) -> Self {
        let mut images = vec![0u8; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            images[g.images[i] as usize] = g.images[v as usize];
        }
        Self { images }
    }

    /// Cycle lengths in decreasing order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x] as usize;
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut c = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                c.push(x + 1);
                x = self.images[x] as usize;
            }
            out.push(c);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.images())
    }
}

/// All of `S_n` in lexicographic order of images.
pub fn symmetric_group(n: usize) -> Vec<Permutation> {
    let mut cur: Vec<u8> = (0..n as u8).collect();
    let mut out = vec![Permutation { images: cur.clone() }];
    loop {
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { return out };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(Permutation { images: cur.clone() });
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// `s^-1 t^-1 s t`.
    InverseFirst,
    /// `s t s^-1 t^-1`.
    InverseLast,
}

pub fn commutator_with(s: &Permutation, t: &Permutation, c: Convention) -> Result<Permutation, MonodromyError> {
    s.check(t)?;
    let (si, ti) = (s.inverse(), t.inverse());
    let word = match c {
        Convention::InverseFirst => [&si, &ti, s, t],
        Convention::InverseLast => [s, t, &si, &ti],
    };
    Ok(word[1..].iter().fold(word[0].clone(), |acc, p| acc.then_unchecked(p)))
}

/// `s^-1 t^-1 s t`.
pub fn commutator(s: &Permutation, t: &Permutation) -> Result<Permutation, MonodromyError> {
    commutator_with(s, t, Convention::InverseFirst)
}

/// Whether `<s, t>` acts transitively on `{1..n}`.
pub fn is_transitive(s: &Permutation, t: &Permutation) -> Result<bool, MonodromyError> {
    s.check(t)?;
    let n = s.degree();
    if n == 0 {
        return Ok(true);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for y in [s.images[x], t.images[x]] {
            let y = y as usize;
            if !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    Ok(count == n)
}

/// A cycle type: a partition of `n`, or "one `k`-cycle and fixed points" for any `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CycleType {
    Cycle(usize),
    Partition(Vec<usize>),
}

impl CycleType {
    pub fn matches(&self, p: &Permutation) -> bool {
        let ct = p.cycle_type();
        match self {
            CycleType::Cycle(1) => p.is_identity(),
            CycleType::Cycle(k) => ct.first() == Some(k) && ct[1..].iter().all(|&c| c == 1),
            CycleType::Partition(parts) => {
                let mut parts = parts.clone();
                parts.sort_unstable_by(|a, b| b.cmp(a));
                parts == ct
            }
        }
    }
}

impl FromStr for CycleType {
    type Err = MonodromyError;

    /// `"3-cycle"`, `"identity"`, or a partition such as `"3,1,1"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let err = || MonodromyError::CycleType(s.to_string());
        if t == "identity" {
            return Ok(CycleType::Cycle(1));
        }
        if let Some(k) = t.strip_suffix("-cycle") {
            let k: usize = k.parse().map_err(|_| err())?;
            return if k == 0 { Err(err()) } else { Ok(CycleType::Cycle(k)) };
        }
        let parts: Vec<usize> =
            t.split(',').map(|p| p.trim().parse::<usize>()).collect::<Result<_, _>>().map_err(|_| err())?;
        if parts.contains(&0) {
            return Err(err());
        }
        Ok(CycleType::Partition(parts))
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleType::Cycle(1) => f.write_str("identity"),
            CycleType::Cycle(k) => write!(f, "{k}-cycle"),
            CycleType::Partition(p) => {
                let s: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                f.write_str(&s.join(","))
            }
        }
    }
}

/// Lexicographically smallest `(g s g^-1, g t g^-1)` over `g` in `S_n`.
pub fn canonicalize(s: &Permutation, t: &Permutation) -> Result<(Permutation, Permutation), MonodromyError> {
    s.check(t)?;
    if s.degree() > MAX_DEGREE {
        return Err(MonodromyError::TooLarge(s.degree()));
    }
    Ok(symmetric_group(s.degree())
        .iter()
        .map(|g| (s.conjugate_by(g), t.conjugate_by(g)))
        .min()
        .expect("S_n is nonempty"))
}

/// One orbit of pairs under simultaneous conjugation, by its minimal member.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CoverClass {
    pub sigma: Permutation,
    pub tau: Permutation,
}

impl CoverClass {
    pub fn is_canonical(&self) -> bool {
        canonicalize(&self.sigma, &self.tau).is_ok_and(|(s, t)| s == self.sigma && t == self.tau)
    }
}

impl fmt::Display for CoverClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sigma = {}, tau = {}", self.sigma, self.tau)
    }
}

/// Filter for [`count_classes`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassQuery {
    pub n: usize,
    pub commutator: Option<CycleType>,
    pub transitive: bool,
    pub convention: Convention,
}

impl ClassQuery {
    pub fn new(n: usize, commutator: Option<CycleType>, transitive: bool) -> Self {
        Self { n, commutator, transitive, convention: Convention::InverseFirst }
    }

    fn accepts(&self, s: &Permutation, t: &Permutation) -> bool {
        if self.transitive && !is_transitive(s, t).expect("same degree") {
            return false;
        }
        match &self.commutator {
            Some(ct) => ct.matches(&commutator_with(s, t, self.convention).expect("same degree")),
            None => true,
        }
    }
}

/// Smallest element of each conjugacy class of `S_n`.
fn class_representatives(group: &[Permutation]) -> Vec<Permutation> {
    let mut reps: BTreeSet<Permutation> = BTreeSet::new();
    let mut covered: BTreeSet<Vec<usize>> = BTreeSet::new();
    // `group` is sorted, so the first element of each cycle type is the minimum.
    for p in group {
        if covered.insert(p.cycle_type()) {
            reps.insert(p.clone());
        }
    }
    reps.into_iter().collect()
}

/// Canonical representatives of all classes passing the filter, sorted.
///
/// With `σ` fixed to the minimum of its conjugacy class, the minimal pair in an orbit
/// is `(σ, min over the centralizer of τ)`.
pub fn enumerate_classes(q: &ClassQuery) -> Result<Vec<CoverClass>, MonodromyError> {
    if q.n > MAX_DEGREE {
        return Err(MonodromyError::TooLarge(q.n));
    }
    let group = symmetric_group(q.n);
    if q.n <= 1 {
        let id = Permutation::identity(q.n);
        return Ok(vec![CoverClass { sigma: id.clone(), tau: id }]);
    }
    let mut out = Vec::new();
    for sigma in class_representatives(&group) {
        let centralizer: Vec<&Permutation> = group.iter().filter(|g| sigma.conjugate_by(g) == sigma).collect();
        let taus: BTreeSet<Permutation> = group
            .par_iter()
            .filter(|t| q.accepts(&sigma, t))
            .map(|t| centralizer.iter().map(|g| t.conjugate_by(g)).min().expect("contains identity"))
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        out.extend(taus.into_iter().map(|tau| CoverClass { sigma: sigma.clone(), tau }));
    }
    out.sort();
    Ok(out)
}

/// Number of classes passing the filter; `n = 1` has the single empty datum.
pub fn count_classes(q: &ClassQuery) -> Result<usize, MonodromyError> {
    Ok(enumerate_classes(q)?.len())
}
