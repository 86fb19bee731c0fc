//! Point multisets, their hyperplane spectra and the small combinatorial
//! predicates built on them.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{bracket, enumerate_codim, hyperplanes_through, inverse, Space, Subspace};
use crate::gf::{Elem, Field};

/// A multiset of points of PG(v-1, q), keyed by point id.
#[derive(Clone, PartialEq, Eq)]
pub struct PointMultiset {
    space: Space,
    counts: BTreeMap<usize, u32>,
}

impl std::fmt::Debug for PointMultiset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PointMultiset")
            .field("space", &self.space)
            .field("counts", &self.counts)
            .finish()
    }
}

impl PointMultiset {
    pub fn new(space: &Space) -> PointMultiset {
        PointMultiset {
            space: space.clone(),
            counts: BTreeMap::new(),
        }
    }

    /// A multiset from point ids; repeated ids add up.
    pub fn from_points(space: &Space, ids: impl IntoIterator<Item = usize>) -> PointMultiset {
        let mut m = PointMultiset::new(space);
        for id in ids {
            m.add(id, 1);
        }
        m
    }

    pub fn from_counts(space: &Space, counts: impl IntoIterator<Item = (usize, u32)>) -> PointMultiset {
        let mut m = PointMultiset::new(space);
        for (id, c) in counts {
            m.add(id, c);
        }
        m
    }

    /// A multiset from coordinate vectors (normalized on the way in).
    pub fn from_vectors(space: &Space, vecs: &[Vec<Elem>]) -> Result<PointMultiset> {
        let mut m = PointMultiset::new(space);
        for x in vecs {
            m.add(space.id_of(x)?, 1);
        }
        Ok(m)
    }

    /// Every point of a subspace once.
    pub fn from_subspace(space: &Space, k: &Subspace) -> PointMultiset {
        PointMultiset::from_points(space, k.points(space))
    }

    pub fn add(&mut self, id: usize, m: u32) {
        assert!(id < self.space.num_points(), "point id out of range");
        if m > 0 {
            *self.counts.entry(id).or_insert(0) += m;
        }
    }

    pub fn remove(&mut self, id: usize) {
        self.counts.remove(&id);
    }

    #[inline]
    pub fn space(&self) -> &Space {
        &self.space
    }

    #[inline]
    pub fn field(&self) -> &Field {
        self.space.field()
    }

    #[inline]
    pub fn v(&self) -> usize {
        self.space.v()
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.space.q()
    }

    /// Total cardinality counted with multiplicity.
    pub fn n(&self) -> u64 {
        self.counts.values().map(|&c| c as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    #[inline]
    pub fn mult(&self, id: usize) -> u32 {
        self.counts.get(&id).copied().unwrap_or(0)
    }

    pub fn contains(&self, id: usize) -> bool {
        self.counts.contains_key(&id)
    }

    /// `(id, multiplicity)` pairs in ascending id order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }

    pub fn support(&self) -> Vec<usize> {
        self.counts.keys().copied().collect()
    }

    /// Point ids repeated by multiplicity, ascending.
    pub fn to_id_list(&self) -> Vec<usize> {
        self.iter()
            .flat_map(|(id, m)| std::iter::repeat_n(id, m as usize))
            .collect()
    }

    pub fn is_set(&self) -> bool {
        self.counts.values().all(|&c| c <= 1)
    }

    pub fn max_mult(&self) -> u32 {
        self.counts.values().copied().max().unwrap_or(0)
    }

    pub(crate) fn require_set(&self) -> Result<()> {
        if self.is_set() {
            Ok(())
        } else {
            Err(Error::NotASet)
        }
    }

    fn check_subspace(&self, k: &Subspace) -> Result<()> {
        if k.ambient_dim() != self.v() {
            return Err(Error::DimensionMismatch {
                expected: self.v(),
                found: k.ambient_dim(),
            });
        }
        Ok(())
    }

    /// Image under `x -> A * frob^e(x)`.
    pub fn transform(&self, a: &[Vec<Elem>], frob: u32) -> Result<PointMultiset> {
        let f = self.field();
        if a.len() != self.v() || inverse(f, a).is_none() {
            return Err(Error::InvalidArgument("transformation matrix is not invertible".into()));
        }
        let mut out = PointMultiset::new(&self.space);
        for (id, m) in self.iter() {
            let mut x = self.space.point(id).to_vec();
            for _ in 0..frob % f.h() {
                for c in x.iter_mut() {
                    *c = f.frobenius(*c);
                }
            }
            let y: Vec<Elem> = a.iter().map(|row| f.dot(row, &x)).collect();
            out.add(self.space.id_of_vec(&y).expect("invertible"), m);
        }
        Ok(out)
    }
}

/// Census of subspaces of a fixed codimension by intersection multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Spectrum {
    pub codim: usize,
    pub n: u64,
    pub v: usize,
    pub q: usize,
    /// Raw multiplicity `i` to count `a_i`; zero counts are omitted.
    pub a: BTreeMap<u64, u64>,
}

impl Spectrum {
    pub fn get(&self, i: u64) -> u64 {
        self.a.get(&i).copied().unwrap_or(0)
    }

    /// Values `a_i` for the given indices, in order.
    pub fn values(&self, indices: &[u64]) -> Vec<u64> {
        indices.iter().map(|&i| self.get(i)).collect()
    }

    pub fn total(&self) -> u64 {
        self.a.values().sum()
    }
}

/// `|M ∩ K|` counted with multiplicity.
pub fn multiplicity(m: &PointMultiset, k: &Subspace) -> Result<u64> {
    m.check_subspace(k)?;
    let f = m.field();
    Ok(m.iter()
        .filter(|&(id, _)| k.contains_vec(f, m.space().point(id)))
        .map(|(_, c)| c as u64)
        .sum())
}

/// Multiplicity of every hyperplane, indexed by the id of its normal.
pub fn hyperplane_multiplicities(m: &PointMultiset) -> Vec<u64> {
    let s = m.space();
    let f = m.field();
    let support: Vec<(&[Elem], u64)> = m.iter().map(|(id, c)| (s.point(id), c as u64)).collect();
    s.points()
        .map(|h| {
            let normal = s.point(h);
            support
                .iter()
                .filter(|(x, _)| f.dot(normal, x) == 0)
                .map(|&(_, c)| c)
                .sum()
        })
        .collect()
}

/// The codimension-`codim` spectrum of `m`.
pub fn spectrum(m: &PointMultiset, codim: usize) -> Result<Spectrum> {
    let v = m.v();
    if codim == 0 || codim >= v {
        return Err(Error::InvalidArgument(format!(
            "codimension must lie in 1..{v}, got {codim}"
        )));
    }
    let mut a = BTreeMap::new();
    if codim == 1 {
        for x in hyperplane_multiplicities(m) {
            *a.entry(x).or_insert(0) += 1;
        }
    } else {
        if v > 6 {
            return Err(Error::Guard("codimension >= 2 spectra need v <= 6".into()));
        }
        for k in enumerate_codim(m.space(), codim) {
            *a.entry(multiplicity(m, &k)?).or_insert(0) += 1;
        }
    }
    Ok(Spectrum {
        codim,
        n: m.n(),
        v,
        q: m.q(),
        a,
    })
}

/// Outcome of a divisibility test; `witness` is the normal of a hyperplane
/// violating the congruence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Divisibility {
    pub divisible: bool,
    pub witness: Option<usize>,
}

/// Whether every hyperplane meets `m` in a number congruent to `|m|` modulo `delta`.
pub fn is_divisible(m: &PointMultiset, delta: u64) -> Result<Divisibility> {
    if delta == 0 {
        return Err(Error::InvalidArgument("delta must be positive".into()));
    }
    let n = m.n();
    let witness = hyperplane_multiplicities(m)
        .iter()
        .position(|&x| !(n - x).is_multiple_of(delta));
    Ok(Divisibility {
        divisible: witness.is_none(),
        witness,
    })
}

/// Largest `r` such that `m` is `q^r`-divisible.
pub fn divisibility_exponent(m: &PointMultiset) -> Result<u32> {
    if m.is_empty() {
        return Err(Error::EmptyMultiset);
    }
    let n = m.n();
    let g = hyperplane_multiplicities(m)
        .iter()
        .fold(0u64, |g, &x| num_integer::gcd(g, n - x));
    let q = m.q() as u64;
    let mut r = 0;
    let mut g = g;
    while g > 0 && g % q == 0 {
        g /= q;
        r += 1;
    }
    Ok(r)
}

/// Whether the support spans the ambient space.
pub fn is_spanning(m: &PointMultiset) -> bool {
    Subspace::span(m.space(), &m.support()).dim() == m.v()
}

/// The `q+1` hyperplane multiplicities through a codimension-2 subspace,
/// sorted in descending order.
pub fn pencil_distribution(m: &PointMultiset, k: &Subspace) -> Result<Vec<u64>> {
    m.check_subspace(k)?;
    let s = m.space();
    let f = m.field();
    let mut out: Vec<u64> = hyperplanes_through(s, k)?
        .into_iter()
        .map(|h| {
            m.iter()
                .filter(|&(id, _)| f.dot(s.point(h), s.point(id)) == 0)
                .map(|(_, c)| c as u64)
                .sum()
        })
        .collect();
    out.sort_unstable_by(|a, b| b.cmp(a));
    Ok(out)
}

/// All multisets of `q+1` values from `allowed` that contain `required` and
/// sum to `n + q*m`. Each is listed in descending order; the list itself is in
/// descending lexicographic order.
pub fn count_pencil_distributions(
    q: u64,
    n: u64,
    m: u64,
    allowed: &[u64],
    required: &[u64],
) -> Vec<Vec<u64>> {
    let mut vals: Vec<u64> = allowed.to_vec();
    vals.sort_unstable_by(|a, b| b.cmp(a));
    vals.dedup();
    let slots = q as usize + 1;
    let target = n + q * m;
    let mut req = BTreeMap::new();
    for &r in required {
        *req.entry(r).or_insert(0usize) += 1;
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(slots);
    fn rec(
        vals: &[u64],
        start: usize,
        slots: usize,
        remaining: u64,
        cur: &mut Vec<u64>,
        req: &BTreeMap<u64, usize>,
        out: &mut Vec<Vec<u64>>,
    ) {
        if cur.len() == slots {
            if remaining == 0
                && req
                    .iter()
                    .all(|(v, &c)| cur.iter().filter(|&&x| x == *v).count() >= c)
            {
                out.push(cur.clone());
            }
            return;
        }
        let left = (slots - cur.len()) as u64;
        for i in start..vals.len() {
            let x = vals[i];
            // Values are descending, so the rest can be at most `x` each.
            if x * left < remaining {
                break;
            }
            if x > remaining {
                continue;
            }
            cur.push(x);
            rec(vals, i, slots, remaining - x, cur, req, out);
            cur.pop();
        }
    }
    rec(&vals, 0, slots, target, &mut cur, &req, &mut out);
    out
}

/// Every line of a plane meets `m`.
pub fn is_blocking_set(m: &PointMultiset) -> Result<bool> {
    if m.v() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: m.v(),
        });
    }
    Ok(hyperplane_multiplicities(m).iter().all(|&x| x >= 1))
}

/// Flips membership of every point of the line `l`.
pub fn symmetric_difference_with_line(m: &PointMultiset, l: &Subspace) -> Result<PointMultiset> {
    if m.v() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: m.v(),
        });
    }
    m.check_subspace(l)?;
    if l.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: l.dim(),
        });
    }
    m.require_set()?;
    let mut out = m.clone();
    for p in l.points(m.space()) {
        if out.contains(p) {
            out.remove(p);
        } else {
            out.add(p, 1);
        }
    }
    Ok(out)
}

/// Image of `m` in the quotient by `b`, using the coordinates outside the
/// pivot columns of `b`.
pub fn quotient(m: &PointMultiset, b: &Subspace) -> Result<PointMultiset> {
    m.check_subspace(b)?;
    let f = m.field();
    let keep: Vec<usize> = (0..m.v()).filter(|c| !b.pivots().contains(c)).collect();
    if keep.is_empty() {
        return Err(Error::PointInSubspace);
    }
    let target = Space::new(f, keep.len())?;
    let mut out = PointMultiset::new(&target);
    for (id, c) in m.iter() {
        let mut x = m.space().point(id).to_vec();
        b.reduce(f, &mut x);
        let y: Vec<Elem> = keep.iter().map(|&i| x[i]).collect();
        let p = target.id_of_vec(&y).ok_or(Error::PointInSubspace)?;
        out.add(p, c);
    }
    Ok(out)
}

/// `m ∩ x` as a multiset of PG(dim x - 1, q), in RREF-basis coordinates.
pub fn restrict(m: &PointMultiset, x: &Subspace) -> Result<PointMultiset> {
    m.check_subspace(x)?;
    let f = m.field();
    let target = Space::new(f, x.dim())?;
    let mut out = PointMultiset::new(&target);
    for (id, c) in m.iter() {
        let p = m.space().point(id);
        if x.contains_vec(f, p) {
            out.add(target.id_of_vec(&x.coordinates(p)).expect("nonzero"), c);
        }
    }
    Ok(out)
}

/// Embeds `m` into a space with `extra` more coordinates, padding with zeros.
pub fn pad(m: &PointMultiset, extra: usize) -> Result<PointMultiset> {
    let target = Space::new(m.field(), m.v() + extra)?;
    let mut out = PointMultiset::new(&target);
    for (id, c) in m.iter() {
        let mut x = m.space().point(id).to_vec();
        x.resize(m.v() + extra, 0);
        out.add(target.id_of_vec(&x).expect("nonzero"), c);
    }
    Ok(out)
}

/// Right-hand sides of the three standard equations for `n` points in
/// PG(v-1, q), the third in the form valid for multisets given the point
/// multiplicities.
pub fn standard_identities(m: &PointMultiset) -> [u128; 3] {
    let q = m.q() as u64;
    let v = m.v() as u32;
    let n = m.n() as u128;
    let b1 = bracket(v, q) as u128;
    let b2 = bracket(v - 1, q) as u128;
    let b3 = if v >= 2 { bracket(v - 2, q) as u128 } else { 0 };
    let pairs_same: u128 = m.iter().map(|(_, c)| (c as u128) * (c as u128 - 1) / 2).sum();
    let pairs = n * n.saturating_sub(1) / 2;
    [b1, n * b2, (pairs - pairs_same) * b3 + pairs_same * b2]
}
