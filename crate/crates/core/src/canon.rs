//! Canonical forms and automorphism group orders of point multisets under
//! PΓL(v, q).
//!
//! A leaf of the search tree is an ordered basis `b_1..b_v` of support points.
//! It contributes the images of the multiset under every map
//! `x -> D * σ(B^{-1} x)` with `D` diagonal (`d_1 = 1`) and `σ` a field
//! automorphism. The canonical key is the lexicographically least sorted list
//! of image point ids over all leaves. The family of leaves is chosen from
//! invariant colour classes only, so equal keys mean equivalent multisets.
//! Automorphisms found on the way prune the tree and give the group order.

use std::collections::HashMap;

use crate::analysis::{hyperplane_multiplicities, restrict, PointMultiset};
use crate::error::{Error, Result};
use crate::geom::{inverse, Subspace};
use crate::gf::{Elem, Field};

/// Largest number of points of the ambient space handled without `stretch`.
pub const CANON_GUARD: usize = 400;

/// Larger spaces are accepted while `points * support` stays below this.
pub const CANON_WORK: u64 = 64 * CANON_GUARD as u64;

/// Whether a multiset with `support` points in a space of `points` points
/// is inside the default guard.
pub fn guard_ok(points: usize, support: u64) -> bool {
    points <= CANON_GUARD || points as u64 * support <= CANON_WORK
}

/// Result of a canonical-form computation.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    /// Sorted image point ids (with repeats), in the ambient space.
    pub key: Vec<u32>,
    /// The canonical representative.
    pub image: PointMultiset,
    /// Order of the stabilizer in PΓL of the span.
    pub stabilizer_order: u128,
    /// Dimension of the span.
    pub rank: usize,
    pub stats: SearchStats,
}

impl CanonicalForm {
    /// Order of the monomial-semilinear automorphism group of the associated
    /// code: the stabilizer order times the `q - 1` scalar multiples.
    pub fn aut_order(&self) -> u128 {
        self.stabilizer_order * (self.image.q() as u128 - 1)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub leaves: u64,
    pub generators: u64,
}

/// Canonical class record: representative plus invariants.
#[derive(Debug, Clone)]
pub struct CanonicalClass {
    pub canonical: PointMultiset,
    pub key: Vec<u32>,
    pub aut_order: Option<u128>,
}

fn check_guard(m: &PointMultiset, stretch: bool) -> Result<()> {
    if !stretch && !guard_ok(m.space().num_points(), m.support().len() as u64) {
        return Err(Error::Guard(format!(
            "PG({}, {}) has {} points (> {CANON_GUARD}); pass --stretch",
            m.v() - 1,
            m.q(),
            m.space().num_points()
        )));
    }
    Ok(())
}

/// Canonical form of `m`. Non-spanning multisets are canonicalized inside
/// their span and embedded back as `(y, 0, ..., 0)`.
pub fn canonical_form(m: &PointMultiset, stretch: bool) -> Result<CanonicalForm> {
    check_guard(m, stretch)?;
    if m.is_empty() {
        return Err(Error::EmptyMultiset);
    }
    let span = Subspace::span(m.space(), &m.support());
    if span.dim() == m.v() {
        return Engine::new(m).run();
    }
    let inner = restrict(m, &span)?;
    let mut cf = Engine::new(&inner).run()?;
    let pad = m.v() - span.dim();
    let mut image = PointMultiset::new(m.space());
    for (id, c) in cf.image.iter() {
        let mut x = inner.space().point(id).to_vec();
        x.resize(x.len() + pad, 0);
        image.add(m.space().id_of_vec(&x).expect("nonzero"), c);
    }
    cf.key = image.to_id_list().iter().map(|&x| x as u32).collect();
    cf.image = image;
    Ok(cf)
}

/// Canonical key only.
pub fn canonical_key(m: &PointMultiset, stretch: bool) -> Result<Vec<u32>> {
    Ok(canonical_form(m, stretch)?.key)
}

pub fn canonical_class(m: &PointMultiset, stretch: bool) -> Result<CanonicalClass> {
    let cf = canonical_form(m, stretch)?;
    Ok(CanonicalClass {
        aut_order: Some(cf.aut_order()),
        canonical: cf.image,
        key: cf.key,
    })
}

/// The code-convention automorphism order `(q-1) * |Stab|`.
pub fn aut_order(m: &PointMultiset, stretch: bool) -> Result<u128> {
    Ok(canonical_form(m, stretch)?.aut_order())
}

/// Whether two multisets over the same space are PΓL-equivalent.
pub fn are_equivalent(a: &PointMultiset, b: &PointMultiset, stretch: bool) -> Result<bool> {
    if a.v() != b.v() || a.field() != b.field() || a.n() != b.n() {
        return Err(Error::ParameterMismatch(format!(
            "(v,q,n) = ({},{},{}) vs ({},{},{})",
            a.v(),
            a.q(),
            a.n(),
            b.v(),
            b.q(),
            b.n()
        )));
    }
    Ok(canonical_key(a, stretch)? == canonical_key(b, stretch)?)
}

struct Leaf {
    path: Vec<usize>,
    key: Vec<u32>,
    /// `(image id, support index)` sorted by image id.
    inv: Vec<(u32, u32)>,
}

struct Engine<'a> {
    m: &'a PointMultiset,
    f: Field,
    v: usize,
    pts: Vec<Vec<Elem>>,
    mult: Vec<u32>,
    color: Vec<u32>,
    /// Multiplicity of the line through two support points.
    lm: Vec<u32>,
    diags: Vec<Vec<Elem>>,
    autos: Vec<Vec<Elem>>,
    first: Option<Leaf>,
    best: Option<Leaf>,
    gens: Vec<Vec<u32>>,
    first_stab: u128,
    stats: SearchStats,
}

fn relabel<T: Ord + Clone>(raw: &[T]) -> Vec<u32> {
    let mut distinct: Vec<T> = raw.to_vec();
    distinct.sort();
    distinct.dedup();
    raw.iter()
        .map(|c| distinct.binary_search(c).unwrap() as u32)
        .collect()
}

impl<'a> Engine<'a> {
    fn new(m: &'a PointMultiset) -> Engine<'a> {
        let s = m.space();
        let f = m.field().clone();
        let v = m.v();
        let support = m.support();
        let pts: Vec<Vec<Elem>> = support.iter().map(|&p| s.point(p).to_vec()).collect();
        let mult: Vec<u32> = support.iter().map(|&p| m.mult(p)).collect();
        let k = pts.len();

        // Base colour: multiplicity plus the multiplicities of the hyperplanes
        // through the point.
        let hm = hyperplane_multiplicities(m);
        let raw: Vec<Vec<u64>> = pts
            .iter()
            .zip(&mult)
            .map(|(x, &mu)| {
                let mut hist: Vec<u64> = s
                    .points()
                    .filter(|&h| f.dot(s.point(h), x) == 0)
                    .map(|h| hm[h])
                    .collect();
                hist.sort_unstable();
                hist.insert(0, mu as u64);
                hist
            })
            .collect();
        let mut color = relabel(&raw);

        let mut lm = vec![0u32; k * k];
        for i in 0..k {
            for j in i + 1..k {
                let line = Subspace::from_vectors(s, vec![pts[i].clone(), pts[j].clone()]);
                let c: u32 = (0..k)
                    .filter(|&t| line.contains_vec(&f, &pts[t]))
                    .map(|t| mult[t])
                    .sum();
                lm[i * k + j] = c;
                lm[j * k + i] = c;
            }
        }

        // Refine colours by the line profile until stable.
        loop {
            let raw: Vec<(u32, Vec<(u32, u32)>)> = (0..k)
                .map(|i| {
                    let mut prof: Vec<(u32, u32)> = (0..k)
                        .filter(|&j| j != i)
                        .map(|j| (color[j], lm[i * k + j]))
                        .collect();
                    prof.sort_unstable();
                    (color[i], prof)
                })
                .collect();
            let next = relabel(&raw);
            let before = color.iter().collect::<std::collections::BTreeSet<_>>().len();
            let after = next.iter().collect::<std::collections::BTreeSet<_>>().len();
            color = next;
            if after == before {
                break;
            }
        }

        let units: Vec<Elem> = f.units().collect();
        let mut diags = vec![vec![1u8]];
        for _ in 1..v {
            diags = diags
                .into_iter()
                .flat_map(|d| {
                    units.iter().map(move |&u| {
                        let mut e = d.clone();
                        e.push(u);
                        e
                    })
                })
                .collect();
        }
        let autos = f.automorphisms();
        Engine {
            m,
            f,
            v,
            pts,
            mult,
            color,
            lm,
            diags,
            autos,
            first: None,
            best: None,
            gens: Vec::new(),
            first_stab: 0,
            stats: SearchStats::default(),
        }
    }

    fn run(mut self) -> Result<CanonicalForm> {
        let mut prefix = Vec::with_capacity(self.v);
        self.search(&mut prefix);
        let best = self.best.take().expect("a spanning multiset has a leaf");
        let first = self.first.take().expect("first leaf");
        let mut order = self.first_stab;
        for k in 0..self.v {
            order *= self.orbit(&first.path[..k], first.path[k]).len() as u128;
        }
        let s = self.m.space();
        let mut image = PointMultiset::new(s);
        for &id in &best.key {
            image.add(id as usize, 1);
        }
        self.stats.generators = self.gens.len() as u64;
        Ok(CanonicalForm {
            key: best.key,
            image,
            stabilizer_order: order,
            rank: self.v,
            stats: self.stats,
        })
    }

    fn k(&self) -> usize {
        self.pts.len()
    }

    /// Orbit of `x` under the generators fixing `prefix` pointwise.
    fn orbit(&self, prefix: &[usize], x: usize) -> Vec<usize> {
        let gens: Vec<&Vec<u32>> = self
            .gens
            .iter()
            .filter(|g| prefix.iter().all(|&p| g[p] as usize == p))
            .collect();
        let mut seen = vec![false; self.k()];
        let mut stack = vec![x];
        seen[x] = true;
        let mut out = vec![x];
        while let Some(y) = stack.pop() {
            for g in &gens {
                let z = g[y] as usize;
                if !seen[z] {
                    seen[z] = true;
                    out.push(z);
                    stack.push(z);
                }
            }
        }
        out
    }

    fn search(&mut self, prefix: &mut Vec<usize>) -> Option<usize> {
        self.stats.nodes += 1;
        let depth = prefix.len();
        if depth == self.v {
            return self.leaf(prefix);
        }
        let s = self.m.space();
        let span = Subspace::from_vectors(s, prefix.iter().map(|&i| self.pts[i].clone()).collect());
        let k = self.k();
        let mut colored: Vec<(Vec<u32>, usize)> = Vec::new();
        for x in 0..k {
            if span.contains_vec(&self.f, &self.pts[x]) {
                continue;
            }
            let mut key = Vec::with_capacity(depth + 2);
            key.push(self.color[x]);
            key.extend(prefix.iter().map(|&p| self.lm[p * k + x]));
            if depth >= 2 {
                let w = span.join_vec(s, &self.pts[x]);
                let c: u32 = (0..k)
                    .filter(|&t| w.contains_vec(&self.f, &self.pts[t]))
                    .map(|t| self.mult[t])
                    .sum();
                key.push(c);
            }
            colored.push((key, x));
        }
        colored.sort();
        // Smallest cell, ties broken by colour.
        let mut cells: Vec<(usize, &Vec<u32>, Vec<usize>)> = Vec::new();
        for (key, x) in &colored {
            match cells.last_mut() {
                Some((n, k2, xs)) if *k2 == key => {
                    *n += 1;
                    xs.push(*x);
                }
                _ => cells.push((1, key, vec![*x])),
            }
        }
        let cell = cells
            .into_iter()
            .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(b.1)))
            .map(|c| c.2)
            .expect("spanning multiset has a candidate");

        let mut explored: Vec<usize> = Vec::new();
        for &y in &cell {
            if !explored.is_empty() && !self.gens.is_empty() {
                let orb = self.orbit(prefix, y);
                if explored.iter().any(|e| orb.contains(e)) {
                    continue;
                }
            }
            explored.push(y);
            prefix.push(y);
            let r = self.search(prefix);
            prefix.pop();
            if let Some(j) = r {
                if j < depth {
                    return Some(j);
                }
            }
        }
        None
    }

    /// Evaluates a leaf: minimal image key, the number of `(D, σ)` attaining
    /// it and the image id of every support point under the first minimiser.
    fn evaluate(&self, path: &[usize]) -> (Vec<u32>, u128, Vec<u32>) {
        let f = &self.f;
        let v = self.v;
        let s = self.m.space();
        // Columns of B are the basis points.
        let b: Vec<Vec<Elem>> = (0..v)
            .map(|r| path.iter().map(|&i| self.pts[i][r]).collect())
            .collect();
        let binv = inverse(f, &b).expect("basis");
        let ys: Vec<Vec<Elem>> = self.pts.iter().map(|x| crate::geom::mat_vec(f, &binv, x)).collect();
        let mut best: Option<(Vec<u32>, Vec<u32>)> = None;
        let mut count = 0u128;
        let mut z = vec![0u8; v];
        let mut ids = vec![0u32; self.k()];
        let mut key: Vec<u32> = Vec::new();
        for aut in &self.autos {
            for d in &self.diags {
                for (i, y) in ys.iter().enumerate() {
                    for c in 0..v {
                        z[c] = f.mul(d[c], aut[y[c] as usize]);
                    }
                    ids[i] = s.id_of_vec(&z).expect("nonzero") as u32;
                }
                key.clear();
                for (i, &id) in ids.iter().enumerate() {
                    for _ in 0..self.mult[i] {
                        key.push(id);
                    }
                }
                key.sort_unstable();
                match &best {
                    None => {
                        best = Some((key.clone(), ids.clone()));
                        count = 1;
                    }
                    Some((bk, _)) => match key.cmp(bk) {
                        std::cmp::Ordering::Less => {
                            best = Some((key.clone(), ids.clone()));
                            count = 1;
                        }
                        std::cmp::Ordering::Equal => count += 1,
                        std::cmp::Ordering::Greater => {}
                    },
                }
            }
        }
        let (k, i) = best.expect("at least one transform");
        (k, count, i)
    }

    fn leaf(&mut self, path: &[usize]) -> Option<usize> {
        self.stats.leaves += 1;
        let (key, count, ids) = self.evaluate(path);
        let make_inv = |ids: &[u32]| {
            let mut inv: Vec<(u32, u32)> = ids.iter().enumerate().map(|(i, &x)| (x, i as u32)).collect();
            inv.sort_unstable();
            inv
        };
        let Some(first) = &self.first else {
            let leaf = Leaf {
                path: path.to_vec(),
                key: key.clone(),
                inv: make_inv(&ids),
            };
            self.first_stab = count;
            self.best = Some(Leaf {
                path: leaf.path.clone(),
                key,
                inv: leaf.inv.clone(),
            });
            self.first = Some(leaf);
            return None;
        };
        let best = self.best.as_ref().unwrap();
        let target = if key == first.key {
            Some(first)
        } else if key == best.key {
            Some(best)
        } else {
            None
        };
        if let Some(t) = target {
            let gen: Vec<u32> = ids
                .iter()
                .map(|&x| {
                    let p = t.inv.binary_search_by_key(&x, |e| e.0).expect("same image");
                    t.inv[p].1
                })
                .collect();
            let j = path.iter().zip(&t.path).take_while(|(a, b)| a == b).count();
            if gen.iter().enumerate().any(|(i, &g)| g as usize != i) {
                self.gens.push(gen);
            }
            return Some(j);
        }
        if key < best.key {
            self.best = Some(Leaf {
                path: path.to_vec(),
                key,
                inv: make_inv(&ids),
            });
        }
        None
    }
}

/// Distinct canonical classes of a list, keeping the first representative of
/// each class in input order.
pub fn dedup_by_canonical(items: Vec<PointMultiset>, stretch: bool) -> Result<Vec<(Vec<u32>, PointMultiset)>> {
    let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut out = Vec::new();
    for m in items {
        let key = canonical_key(&m, stretch)?;
        if !seen.contains_key(&key) {
            seen.insert(key.clone(), out.len());
            out.push((key, m));
        }
    }
    Ok(out)
}
