//! Exhaustive classification of divisible point multisets.
//!
//! Spanning multisets of `n` points in `PG(k-1, q)` are built from those in
//! `PG(k-2, q)`: projecting from a point `P` of maximum multiplicity `m_P`
//! gives a multiset `R` of `n - m_P` points whose multiplicities are at most
//! `q * m_P`, and `R` is divisible whenever the original is. Conversely every
//! multiset with quotient `R` arises by spreading each point `x` of `R` over
//! the `q` points `(x, t)` of its line through `P`. Hyperplanes through `P`
//! are controlled by `R`; the remaining `q^(k-1)` hyperplanes give linear
//! congruences on the spreads, solved by a meet-in-the-middle join. Shearing
//! `(x, t) -> (x, t + l(x))` fixes `P` and `R`, so spreads over a basis of
//! `R` are taken up to translation. Lifts are deduplicated by canonical form.

use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::analysis::{hyperplane_multiplicities, PointMultiset};
use crate::canon::{canonical_form, canonical_key, guard_ok, CanonicalClass};
use crate::cylinder::{affine_geometry_hyperplane, recognize_cylinder};
use crate::error::{Error, Result};
use crate::geom::{bracket, for_each_vector, inverse, mat_vec, rank, Space, Subspace};
use crate::gf::{Elem, Field};

/// Largest `n` for a complete run without `stretch`.
pub const MAX_N: u64 = 64;

/// Largest half of a meet-in-the-middle join, by default and with `stretch`.
pub const DEFAULT_JOIN: u64 = 1 << 22;
pub const STRETCH_JOIN: u64 = 1 << 25;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationTask {
    pub q: u64,
    pub n: u64,
    pub v_min: usize,
    pub v_max: usize,
    /// Divisibility exponent: every hyperplane meets the multiset in
    /// `n mod q^r` points.
    pub r: Option<u32>,
    pub projective: bool,
    /// Largest point multiplicity when not projective.
    pub max_mult: u32,
    /// Allowed hyperplane multiplicities.
    pub allowed: Option<Vec<u64>>,
    pub stretch: bool,
}

impl ClassificationTask {
    /// Projective sets of `n` points, all span dimensions the guard permits.
    pub fn projective(q: u64, n: u64, r: Option<u32>) -> ClassificationTask {
        let mut t = ClassificationTask {
            q,
            n,
            v_min: 1,
            v_max: n as usize,
            r,
            projective: true,
            max_mult: 1,
            allowed: None,
            stretch: false,
        };
        if let Some(r) = r {
            // Dimension bound for q^r-divisible codes.
            t.v_max = t.v_max.min(q as usize * (r as usize + 1));
        }
        t.v_max = t.v_max.min(t.guard_dim());
        t
    }

    pub fn delta(&self) -> u64 {
        self.r.map_or(1, |r| self.q.pow(r))
    }

    fn cap(&self) -> u32 {
        if self.projective {
            1
        } else {
            self.max_mult.max(1)
        }
    }

    /// Largest span dimension inside the default guard.
    pub fn guard_dim(&self) -> usize {
        let mut v = 1;
        while guard_ok(bracket(v as u32 + 1, self.q) as usize, self.n) {
            v += 1;
        }
        v
    }

    fn check(&self) -> Result<()> {
        if self.stretch {
            return Ok(());
        }
        if self.n > MAX_N {
            return Err(Error::Guard(format!("n = {} exceeds {MAX_N}; pass --stretch", self.n)));
        }
        if self.v_max > self.guard_dim() {
            return Err(Error::Guard(format!(
                "dimension {} exceeds the guard for q = {}, n = {} (at most {}); pass --stretch",
                self.v_max,
                self.q,
                self.n,
                self.guard_dim()
            )));
        }
        Ok(())
    }
}

/// Classes with a given span dimension.
#[derive(Debug, Clone)]
pub struct ClassGroup {
    pub dim: usize,
    pub classes: Vec<CanonicalClass>,
}

/// Work done for one `(n, k, cap)` level of the tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelStats {
    pub n: u64,
    pub k: usize,
    pub cap: u32,
    pub lifts: u64,
    pub classes: u64,
}

#[derive(Debug, Clone)]
pub struct Classification {
    pub task: ClassificationTask,
    pub groups: Vec<ClassGroup>,
    pub levels: Vec<LevelStats>,
}

impl Classification {
    /// `(dimension, number of classes)` for nonempty dimensions.
    pub fn counts(&self) -> Vec<(usize, usize)> {
        self.groups
            .iter()
            .filter(|g| !g.classes.is_empty())
            .map(|g| (g.dim, g.classes.len()))
            .collect()
    }

    pub fn group(&self, dim: usize) -> Option<&ClassGroup> {
        self.groups.iter().find(|g| g.dim == dim)
    }
}

#[derive(Clone)]
struct Class {
    key: Vec<u32>,
    set: PointMultiset,
}

type Memo = HashMap<(u64, usize, u32), Arc<Vec<Class>>>;

struct Tower {
    field: Field,
    delta: u64,
    memo: Mutex<Memo>,
    spaces: Mutex<HashMap<usize, Space>>,
    stats: Mutex<Vec<LevelStats>>,
    /// Largest half of a join.
    budget: u64,
}

impl Tower {
    fn new(field: &Field, delta: u64, budget: u64) -> Tower {
        Tower {
            budget,
            field: field.clone(),
            delta,
            memo: Mutex::new(HashMap::new()),
            spaces: Mutex::new(HashMap::new()),
            stats: Mutex::new(Vec::new()),
        }
    }

    fn space(&self, k: usize) -> Result<Space> {
        let mut g = self.spaces.lock().unwrap();
        if let Some(s) = g.get(&k) {
            return Ok(s.clone());
        }
        let s = Space::new(&self.field, k)?;
        g.insert(k, s.clone());
        Ok(s)
    }

    /// Spanning `delta`-divisible multisets of `n` points in `PG(k-1, q)` with
    /// multiplicities at most `cap`, one per class, sorted by key.
    fn classify(&self, n: u64, k: usize, cap: u32) -> Result<Arc<Vec<Class>>> {
        let cap = cap.min(n as u32);
        if let Some(c) = self.memo.lock().unwrap().get(&(n, k, cap)) {
            return Ok(c.clone());
        }
        let (classes, lifts) = self.compute(n, k, cap)?;
        let classes = Arc::new(classes);
        self.memo.lock().unwrap().insert((n, k, cap), classes.clone());
        self.stats.lock().unwrap().push(LevelStats {
            n,
            k,
            cap,
            lifts,
            classes: classes.len() as u64,
        });
        Ok(classes)
    }

    fn compute(&self, n: u64, k: usize, cap: u32) -> Result<(Vec<Class>, u64)> {
        if k == 0 || n < k as u64 || cap == 0 {
            return Ok((Vec::new(), 0));
        }
        let s = self.space(k)?;
        if k == 1 {
            if n <= cap as u64 && n.is_multiple_of(self.delta) {
                let m = PointMultiset::from_counts(&s, [(0, n as u32)]);
                let key = vec![0; n as usize];
                return Ok((vec![Class { key, set: m }], 1));
            }
            return Ok((Vec::new(), 0));
        }
        let q = self.field.q() as u32;
        let mut work: Vec<(u32, Class)> = Vec::new();
        for mp in 1..=cap {
            let rest = n - mp as u64;
            let sub_cap = (q * mp).min(rest as u32);
            for c in self.classify(rest, k - 1, sub_cap)?.iter() {
                work.push((mp, c.clone()));
            }
        }
        let found: Vec<Result<Vec<(Vec<u32>, PointMultiset)>>> = work
            .par_iter()
            .map(|(mp, r)| {
                let mut local: HashMap<Vec<u32>, PointMultiset> = HashMap::new();
                let mut err = None;
                let res = self.lifts(&s, n, &r.set, *mp, &mut |m| {
                    if err.is_some() {
                        return;
                    }
                    match canonical_form(&m, true) {
                        Ok(cf) => {
                            local.entry(cf.key).or_insert(cf.image);
                        }
                        Err(e) => err = Some(e),
                    }
                });
                match err.or(res.err()) {
                    Some(e) => Err(e),
                    None => Ok(local.into_iter().collect()),
                }
            })
            .collect();
        let mut merged: BTreeMap<Vec<u32>, PointMultiset> = BTreeMap::new();
        let mut lifts = 0u64;
        for part in found {
            for (key, m) in part? {
                lifts += 1;
                merged.entry(key).or_insert(m);
            }
        }
        Ok((merged.into_iter().map(|(key, set)| Class { key, set }).collect(), lifts))
    }

    /// Calls `emit` for every lift of `r` with the top point of multiplicity
    /// `mp`, up to shearing.
    fn lifts(&self, s: &Space, n: u64, r: &PointMultiset, mp: u32, emit: &mut dyn FnMut(PointMultiset)) -> Result<()> {
        let f = &self.field;
        let q = f.q();
        let k = s.v();
        let rs = r.space();
        let supp: Vec<(Vec<Elem>, u32)> = r.iter().map(|(id, mu)| (rs.point(id).to_vec(), mu)).collect();

        // A basis of R among its support points.
        let mut basis = vec![false; supp.len()];
        let mut rows: Vec<Vec<Elem>> = Vec::new();
        for (j, (x, _)) in supp.iter().enumerate() {
            rows.push(x.clone());
            if rank(f, &rows) == rows.len() {
                basis[j] = true;
            } else {
                rows.pop();
            }
        }

        let options: Vec<Vec<Vec<u8>>> = supp
            .iter()
            .enumerate()
            .map(|(j, &(_, mu))| {
                let mut all = spreads(q, mu, mp);
                if basis[j] {
                    all.retain(|d| translation_minimal(f, d));
                }
                all
            })
            .collect();
        if options.iter().any(Vec::is_empty) {
            return Ok(());
        }

        let build = |choice: &[usize]| {
            let mut m = PointMultiset::new(s);
            m.add(s.id_of_vec(&s.unit(k - 1)).unwrap(), mp);
            for (j, (x, _)) in supp.iter().enumerate() {
                let d = &options[j][choice[j]];
                let mut y = x.clone();
                y.push(0);
                for t in 0..q {
                    if d[t] > 0 {
                        y[k - 1] = t as Elem;
                        m.add(s.id_of_vec(&y).unwrap(), d[t] as u32);
                    }
                }
            }
            m
        };

        if self.delta == 1 {
            let total: f64 = options.iter().map(|o| o.len() as f64).product();
            if total > self.budget as f64 {
                return Err(self.over_budget(n, k, total));
            }
            odometer(&options.iter().map(Vec::len).collect::<Vec<_>>(), |c| emit(build(c)));
            return Ok(());
        }

        // Hyperplanes t + u.x = 0 for all u in GF(q)^(k-1); the spread of x
        // contributes d(-u.x) to each.
        let delta = self.delta;
        let mut us: Vec<Vec<Elem>> = Vec::new();
        for_each_vector(q, k - 1, |u| us.push(u.to_vec()));
        let contrib: Vec<Vec<Vec<u8>>> = supp
            .iter()
            .enumerate()
            .map(|(j, (x, _))| {
                let slots: Vec<usize> = us.iter().map(|u| f.neg(f.dot(u, x)) as usize).collect();
                options[j]
                    .iter()
                    .map(|d| slots.iter().map(|&t| (d[t] as u64 % delta) as u8).collect())
                    .collect()
            })
            .collect();
        let target: Vec<u8> = vec![(n % delta) as u8; us.len()];

        // Split the support into two halves of similar search size.
        let mut order: Vec<usize> = (0..supp.len()).collect();
        order.sort_by(|&a, &b| options[b].len().cmp(&options[a].len()));
        let (mut left, mut right) = (Vec::new(), Vec::new());
        let (mut lw, mut rw) = (0f64, 0f64);
        for j in order {
            let w = (options[j].len() as f64).ln();
            if lw <= rw {
                left.push(j);
                lw += w;
            } else {
                right.push(j);
                rw += w;
            }
        }
        let lsizes: Vec<usize> = left.iter().map(|&j| options[j].len()).collect();
        let lsz: f64 = lsizes.iter().map(|&x| x as f64).product();
        let rsz: f64 = right.iter().map(|&j| options[j].len() as f64).product();
        if lsz.min(rsz) > self.budget as f64 || lsz.max(rsz) > 64.0 * self.budget as f64 {
            return Err(self.over_budget(n, k, lsz * rsz));
        }
        let sum_half = |half: &[usize], choice: &[usize]| -> Vec<u8> {
            let mut acc = vec![0u8; us.len()];
            for (i, &j) in half.iter().enumerate() {
                for (a, &c) in acc.iter_mut().zip(&contrib[j][choice[i]]) {
                    *a = ((*a as u64 + c as u64) % delta) as u8;
                }
            }
            acc
        };
        let fingerprint = |v: &[u8]| {
            let mut h = std::collections::hash_map::DefaultHasher::new();
            v.hash(&mut h);
            h.finish()
        };
        // Left halves indexed by a fingerprint of their residues; matches are
        // confirmed on the full vector.
        let mut table: HashMap<u64, Vec<u64>> = HashMap::new();
        let mut index = 0u64;
        odometer(&lsizes, |c| {
            table.entry(fingerprint(&sum_half(&left, c))).or_default().push(index);
            index += 1;
        });
        let unrank = |mut idx: u64, out: &mut [usize]| {
            for i in (0..lsizes.len()).rev() {
                out[i] = (idx % lsizes[i] as u64) as usize;
                idx /= lsizes[i] as u64;
            }
        };
        let mut choice = vec![0usize; supp.len()];
        let mut lc = vec![0usize; left.len()];
        odometer(&right.iter().map(|&j| options[j].len()).collect::<Vec<_>>(), |c| {
            let have = sum_half(&right, c);
            let need: Vec<u8> = target
                .iter()
                .zip(&have)
                .map(|(&t, &h)| ((t as u64 + delta - h as u64) % delta) as u8)
                .collect();
            if let Some(lefts) = table.get(&fingerprint(&need)) {
                for (i, &j) in right.iter().enumerate() {
                    choice[j] = c[i];
                }
                for &idx in lefts {
                    unrank(idx, &mut lc);
                    if sum_half(&left, &lc) != need {
                        continue;
                    }
                    for (i, &j) in left.iter().enumerate() {
                        choice[j] = lc[i];
                    }
                    emit(build(&choice));
                }
            }
        });
        Ok(())
    }

    fn over_budget(&self, n: u64, k: usize, size: f64) -> Error {
        Error::Guard(format!(
            "lifting to {n} points in PG({}, {}) needs about {size:.1e} combinations",
            k - 1,
            self.field.q()
        ))
    }
}

/// Calls `visit` with every index vector below `sizes` (empty product once).
fn odometer(sizes: &[usize], mut visit: impl FnMut(&[usize])) {
    if sizes.contains(&0) {
        return;
    }
    let mut c = vec![0usize; sizes.len()];
    loop {
        visit(&c);
        let mut i = sizes.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            c[i] += 1;
            if c[i] < sizes[i] {
                break;
            }
            c[i] = 0;
        }
    }
}

/// Vectors of `q` entries in `0..=cap` summing to `total`.
fn spreads(q: usize, total: u32, cap: u32) -> Vec<Vec<u8>> {
    fn go(q: usize, left: u32, cap: u32, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == q {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let slots = (q - cur.len()) as u32;
        if left > slots * cap {
            return;
        }
        for x in 0..=left.min(cap) {
            cur.push(x as u8);
            go(q, left - x, cap, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(q, total, cap, &mut Vec::new(), &mut out);
    out
}

/// Whether `d` is the least of its translates `t -> d(t + c)`.
fn translation_minimal(f: &Field, d: &[u8]) -> bool {
    f.elements().skip(1).all(|c| {
        let shifted: Vec<u8> = f.elements().map(|t| d[f.add(t, c) as usize]).collect();
        d <= &shifted[..]
    })
}

fn allowed_ok(m: &PointMultiset, allowed: &Option<Vec<u64>>) -> bool {
    match allowed {
        None => true,
        Some(a) => hyperplane_multiplicities(m).iter().all(|h| a.contains(h)),
    }
}

/// Classes of the task grouped by span dimension, each in `PG(dim-1, q)`.
pub fn enumerate_divisible_sets(task: &ClassificationTask) -> Result<Classification> {
    task.check()?;
    let field = Field::with_order(task.q)?;
    let budget = if task.stretch { STRETCH_JOIN } else { DEFAULT_JOIN };
    let tower = Tower::new(&field, task.delta(), budget);
    let mut groups = Vec::new();
    for dim in task.v_min.max(1)..=task.v_max {
        let classes = tower.classify(task.n, dim, task.cap())?;
        let classes = classes
            .iter()
            .filter(|c| allowed_ok(&c.set, &task.allowed))
            .map(|c| {
                let cf = canonical_form(&c.set, true)?;
                Ok(CanonicalClass {
                    aut_order: Some(cf.aut_order()),
                    canonical: c.set.clone(),
                    key: c.key.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        groups.push(ClassGroup { dim, classes });
    }
    let mut levels = tower.stats.into_inner().unwrap();
    levels.sort_by_key(|l| (l.k, l.n, l.cap));
    Ok(Classification {
        task: task.clone(),
        groups,
        levels,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Vacuous,
}

#[derive(Debug, Clone)]
pub struct ClassFlags {
    pub class: CanonicalClass,
    pub cylinder: bool,
    pub affine: bool,
    /// Equivalent to a set with coordinates in a proper subfield.
    pub subfield: bool,
}

#[derive(Debug, Clone)]
pub struct ConjectureReport {
    pub v: usize,
    pub r: u32,
    pub q: u64,
    pub classes: Vec<ClassFlags>,
    pub verdict: Verdict,
}

impl ConjectureReport {
    pub fn non_cylinders(&self) -> Vec<&ClassFlags> {
        self.classes.iter().filter(|c| !c.cylinder).collect()
    }
}

/// Whether every projective spanning `q^r`-divisible set of `q^(r+1)` points
/// in `PG(v-1, q)` is an `(r+1)`-cylinder.
pub fn conjecture_report(q: u64, r: u32, v: usize, stretch: bool) -> Result<ConjectureReport> {
    let n = q.pow(r + 1);
    let task = ClassificationTask {
        q,
        n,
        v_min: v,
        v_max: v,
        r: Some(r),
        projective: true,
        max_mult: 1,
        allowed: None,
        stretch,
    };
    let cl = enumerate_divisible_sets(&task)?;
    let classes = cl
        .groups
        .into_iter()
        .flat_map(|g| g.classes)
        .map(|c| {
            let cylinder = recognize_cylinder(&c.canonical, r as usize)?.is_some();
            Ok(ClassFlags {
                cylinder,
                affine: affine_geometry_hyperplane(&c.canonical).is_some(),
                subfield: in_proper_subgeometry(&c.canonical),
                class: c,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let verdict = if classes.is_empty() {
        Verdict::Vacuous
    } else if classes.iter().all(|c| c.cylinder) {
        Verdict::True
    } else {
        Verdict::False
    };
    Ok(ConjectureReport {
        v,
        r,
        q,
        classes,
        verdict,
    })
}

/// Whether a spanning multiset lies in a subgeometry over a proper subfield.
/// Relative to a basis chosen from the support, such a subgeometry is a
/// diagonal image of the standard one.
pub fn in_proper_subgeometry(m: &PointMultiset) -> bool {
    let f = m.field();
    let s = m.space();
    let v = m.v();
    let pts: Vec<&[Elem]> = m.support().into_iter().map(|p| s.point(p)).collect();
    let mut basis: Vec<Vec<Elem>> = Vec::new();
    for x in &pts {
        basis.push(x.to_vec());
        if rank(f, &basis) < basis.len() {
            basis.pop();
        }
    }
    if basis.len() < v {
        return false;
    }
    let cols: Vec<Vec<Elem>> = (0..v).map(|r| basis.iter().map(|b| b[r]).collect()).collect();
    let binv = inverse(f, &cols).expect("basis");
    let ys: Vec<Vec<Elem>> = pts.iter().map(|x| mat_vec(f, &binv, x)).collect();
    let units: Vec<Elem> = f.units().collect();
    for h0 in (1..f.h()).filter(|d| f.h().is_multiple_of(*d)) {
        let q0 = (f.p() as u64).pow(h0);
        let inside: Vec<bool> = f.elements().map(|x| f.pow(x, q0) == x).collect();
        let mut found = false;
        odometer(&vec![units.len(); v - 1], |c| {
            if found {
                return;
            }
            let d: Vec<Elem> = std::iter::once(1).chain(c.iter().map(|&i| units[i])).collect();
            found = ys.iter().all(|y| {
                let z: Vec<Elem> = y.iter().zip(&d).map(|(&a, &b)| f.mul(a, b)).collect();
                let lead = z.iter().find(|&&c| c != 0).copied().unwrap_or(1);
                let inv = f.inv_unchecked(lead);
                z.iter().all(|&c| inside[f.mul(c, inv) as usize])
            });
        });
        if found {
            return true;
        }
    }
    false
}

/// Codes of length `target_n` and dimension `k + 1` whose residual with
/// respect to some codeword is `g`, with nonzero weights in `allowed`, up to
/// equivalence. Geometrically: `target_n - n` points are added outside the
/// hyperplane carrying the points of `g`.
pub fn extension_search(
    g: &crate::code::GeneratorMatrix,
    target_k: usize,
    target_n: usize,
    allowed: &[usize],
    projective: bool,
    stretch: bool,
) -> Result<Vec<PointMultiset>> {
    let f = g.field();
    let k = g.k();
    if target_k != k + 1 {
        return Err(Error::InvalidArgument(format!(
            "extension adds one dimension ({k} -> {}), not {target_k}",
            k + 1
        )));
    }
    if !stretch && (f.q() as f64).powi(target_k as i32) > 1e7 {
        return Err(Error::Guard(format!("q^k = {}^{target_k} exceeds 10^7", f.q())));
    }
    if target_n < g.n() {
        return Ok(Vec::new());
    }
    let (base, zeros) = crate::code::points_from_code(g)?;
    if zeros > 0 || (projective && !base.is_set()) {
        return Ok(Vec::new());
    }
    let s = Space::new(f, target_k)?;
    let mut start = PointMultiset::new(&s);
    for (id, c) in base.iter() {
        let mut x = base.space().point(id).to_vec();
        x.push(0);
        start.add(s.id_of_vec(&x).unwrap(), c);
    }
    let hyper: Subspace = Subspace::annihilator_of(&s, &[s.unit(k)]);
    let outside: Vec<usize> = s.points().filter(|&p| !hyper.contains_point(&s, p)).collect();
    let hs: Vec<Vec<bool>> = s.points().map(|h| s.points().map(|p| s.incident(h, p)).collect()).collect();
    let mut counts: Vec<u64> = hs
        .iter()
        .map(|inc| start.iter().filter(|&(p, _)| inc[p]).map(|(_, c)| c as u64).sum())
        .collect();
    // Feasible hyperplane multiplicities: n' - w for allowed w, plus n' for
    // hyperplanes containing everything (excluded later by the rank test).
    let tn = target_n as u64;
    let good: Vec<u64> = allowed.iter().filter(|&&w| w as u64 <= tn).map(|&w| tn - w as u64).collect();
    let mut found: BTreeMap<Vec<u32>, PointMultiset> = BTreeMap::new();
    let mut cur = start.clone();
    let mut err = None;
    extend(
        &outside,
        0,
        target_n - g.n(),
        projective,
        &hs,
        &mut counts,
        &good,
        &mut cur,
        &mut |m| {
            if rank(f, &m.support().iter().map(|&p| s.point(p).to_vec()).collect::<Vec<_>>()) < target_k {
                return;
            }
            match canonical_key(m, true) {
                Ok(key) => {
                    found.entry(key).or_insert_with(|| m.clone());
                }
                Err(e) => err = Some(e),
            }
        },
    );
    if let Some(e) = err {
        return Err(e);
    }
    Ok(found.into_values().collect())
}

#[allow(clippy::too_many_arguments)]
fn extend(
    cands: &[usize],
    from: usize,
    left: usize,
    projective: bool,
    hs: &[Vec<bool>],
    counts: &mut [u64],
    good: &[u64],
    cur: &mut PointMultiset,
    emit: &mut dyn FnMut(&PointMultiset),
) {
    // Every hyperplane must still be able to reach a good multiplicity.
    for &c in counts.iter() {
        if !good.iter().any(|&g| g >= c && g <= c + left as u64) {
            return;
        }
    }
    if left == 0 {
        emit(cur);
        return;
    }
    for i in from..cands.len() {
        let p = cands[i];
        for (h, inc) in hs.iter().enumerate() {
            if inc[p] {
                counts[h] += 1;
            }
        }
        cur.add(p, 1);
        let next = if projective { i + 1 } else { i };
        extend(cands, next, left - 1, projective, hs, counts, good, cur, emit);
        let m = cur.mult(p);
        cur.remove(p);
        if m > 1 {
            cur.add(p, m - 1);
        }
        for (h, inc) in hs.iter().enumerate() {
            if inc[p] {
                counts[h] -= 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{is_divisible, is_spanning};
    use crate::code::{code_from_points, weight_distribution, GeneratorMatrix};

    /// Spanning sets of `n` points in `PG(d-1, q)` up to equivalence, by
    /// running over all sets containing the standard basis.
    fn oracle(q: u64, d: usize, n: usize, delta: u64) -> usize {
        let s = Space::new(&Field::with_order(q).unwrap(), d).unwrap();
        let units: Vec<usize> = (0..d).map(|i| s.id_of(&s.unit(i)).unwrap()).collect();
        let rest: Vec<usize> = s.points().filter(|p| !units.contains(p)).collect();
        if n < d {
            return 0;
        }
        let mut keys = std::collections::BTreeSet::new();
        let mut pick = vec![0usize; n - d];
        fn rec(
            s: &Space,
            units: &[usize],
            rest: &[usize],
            pick: &mut Vec<usize>,
            i: usize,
            from: usize,
            delta: u64,
            keys: &mut std::collections::BTreeSet<Vec<u32>>,
        ) {
            if i == pick.len() {
                let m = PointMultiset::from_points(s, units.iter().chain(pick.iter()).copied());
                if is_divisible(&m, delta).unwrap().divisible {
                    keys.insert(canonical_key(&m, true).unwrap());
                }
                return;
            }
            for j in from..rest.len() {
                pick[i] = rest[j];
                rec(s, units, rest, pick, i + 1, j + 1, delta, keys);
            }
        }
        rec(&s, &units, &rest, &mut pick, 0, 0, delta, &mut keys);
        keys.len()
    }

    fn counts(q: u64, n: u64, r: Option<u32>, v_max: usize) -> Vec<(usize, usize)> {
        let mut t = ClassificationTask::projective(q, n, r);
        t.v_max = v_max;
        enumerate_divisible_sets(&t).unwrap().counts()
    }

    #[test]
    fn helpers() {
        assert_eq!(spreads(3, 2, 1).len(), 3);
        assert_eq!(spreads(4, 5, 4).len(), 52);
        let f = Field::with_order(4).unwrap();
        let mins: Vec<Vec<u8>> = spreads(4, 2, 1).into_iter().filter(|d| translation_minimal(&f, d)).collect();
        assert_eq!(mins.len(), 3);
        let mut n = 0;
        odometer(&[2, 3], |_| n += 1);
        assert_eq!(n, 6);
        odometer(&[], |_| n += 1);
        assert_eq!(n, 7);
    }

    #[test]
    fn small_projective_counts_match_oracle() {
        for (q, n) in [(2u64, 4u64), (3, 4), (4, 4), (2, 5)] {
            let got = counts(q, n, None, n as usize);
            let want: Vec<(usize, usize)> = (1..=n as usize)
                .map(|d| (d, oracle(q, d, n as usize, 1)))
                .filter(|&(_, c)| c > 0)
                .collect();
            assert_eq!(got, want, "q={q} n={n}");
        }
        assert_eq!(counts(4, 4, None, 4), vec![(2, 1), (3, 2), (4, 1)]);
    }

    #[test]
    fn binary_divisible_counts() {
        assert_eq!(counts(2, 4, Some(1), 4), vec![(3, 1)]);
        for d in 1..=4 {
            assert_eq!(oracle(2, d, 4, 2), usize::from(d == 3));
        }
        assert_eq!(counts(2, 8, Some(2), 6), vec![(4, 1)]);
    }

    #[test]
    fn ternary_divisible_counts() {
        let got = counts(3, 9, Some(1), 4);
        assert_eq!(got, vec![(3, 1), (4, 1)]);
        assert_eq!(oracle(3, 3, 9, 3), 1);
        assert_eq!(oracle(3, 4, 9, 3), 1);
    }

    #[test]
    fn multisets() {
        let mut t = ClassificationTask::projective(2, 4, Some(1));
        t.projective = false;
        t.max_mult = 2;
        t.v_max = 3;
        let cl = enumerate_divisible_sets(&t).unwrap();
        for g in &cl.groups {
            for c in &g.classes {
                assert!(is_divisible(&c.canonical, 2).unwrap().divisible);
                assert!(is_spanning(&c.canonical));
                assert!(c.canonical.max_mult() <= 2);
            }
        }
        // 2P+2Q on a line and AG(2,2); every point of a line carries an
        // even multiplicity.
        assert_eq!(cl.counts(), vec![(2, 1), (3, 1)]);
    }

    #[test]
    fn conjecture_small() {
        let rep = conjecture_report(2, 1, 3, false).unwrap();
        assert_eq!(rep.verdict, Verdict::True);
        assert!(rep.classes[0].affine);
        let rep = conjecture_report(2, 1, 4, false).unwrap();
        assert_eq!(rep.verdict, Verdict::Vacuous);
        let rep = conjecture_report(3, 1, 4, false).unwrap();
        assert_eq!(rep.verdict, Verdict::True);
        assert_eq!(rep.classes.len(), 1);
    }

    #[test]
    fn subgeometry_test() {
        let s = Space::new(&Field::with_order(2).unwrap(), 5).unwrap();
        let ag = PointMultiset::from_points(&s, s.points().filter(|&p| s.point(p)[0] == 1));
        let e = crate::cylinder::subfield_embed(&ag, 2).unwrap();
        assert!(in_proper_subgeometry(&e));
        let s4 = Space::new(&Field::with_order(4).unwrap(), 3).unwrap();
        let conic_like = PointMultiset::from_points(&s4, s4.points().filter(|&p| s4.point(p)[0] == 1));
        assert!(!in_proper_subgeometry(&conic_like));
        let f5 = Field::prime(5).unwrap();
        let s5 = Space::new(&f5, 2).unwrap();
        assert!(!in_proper_subgeometry(&PointMultiset::from_points(&s5, [0, 1])));
    }

    #[test]
    fn extensions() {
        let f = Field::prime(2).unwrap();
        let s2 = Space::new(&f, 2).unwrap();
        let simplex = code_from_points(&PointMultiset::from_points(&s2, s2.points())).unwrap().matrix;
        let ext = extension_search(&simplex, 3, 7, &[4], true, false).unwrap();
        assert_eq!(ext.len(), 1);
        let s3 = Space::new(&f, 3).unwrap();
        assert_eq!(ext[0], PointMultiset::from_points(&s3, s3.points()));

        let ag = PointMultiset::from_points(&s3, s3.points().filter(|&p| s3.point(p)[0] == 1));
        let g = code_from_points(&ag).unwrap().matrix;
        let ext = extension_search(&g, 4, 8, &[4, 8], true, false).unwrap();
        assert_eq!(ext.len(), 1);
        assert!(affine_geometry_hyperplane(&ext[0]).is_some());
        let w = weight_distribution(&code_from_points(&ext[0]).unwrap().matrix).unwrap();
        assert_eq!(w.counts.keys().copied().collect::<Vec<_>>(), vec![0, 4, 8]);

        assert!(extension_search(&g, 4, 8, &[], true, false).unwrap().is_empty());
        assert!(extension_search(&g, 5, 8, &[4], true, false).is_err());
        let big = GeneratorMatrix::new(&f, vec![vec![1]; 24]).unwrap();
        assert!(matches!(
            extension_search(&big, 25, 30, &[4], true, false),
            Err(Error::Guard(_))
        ));
    }

    #[test]
    fn guards() {
        let t = ClassificationTask::projective(4, 16, Some(1));
        assert!(t.v_max >= 5);
        let mut big = t.clone();
        big.n = 100;
        assert!(matches!(enumerate_divisible_sets(&big), Err(Error::Guard(_))));
    }
}
