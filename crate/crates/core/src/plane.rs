//! Exhaustive search for point sets of a projective plane with prescribed
//! line multiplicities.
//!
//! A line `L` of maximum multiplicity `m` is moved to `x0 = 0` and three of
//! its points (when `m >= 3`) to fixed positions; the lines fixing `L`
//! pointwise act transitively on the affine part, so one affine point is the
//! origin. The remaining affine points are added in ascending id order.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::analysis::PointMultiset;
use crate::canon::{canonical_class, CanonicalClass};
use crate::error::{Error, Result};
use crate::geom::Space;
use crate::gf::Field;

/// Largest search space without `stretch`, as `q^2` affine points times the
/// number of points to place.
pub const PLANE_WORK: u64 = 1600;

#[derive(Debug, Clone)]
pub struct PlaneSearch {
    pub classes: Vec<CanonicalClass>,
    pub nodes: u64,
}

struct Geo {
    /// Lines through each point, as normal ids.
    lines_of: Vec<Vec<usize>>,
    /// Affine points of each line, ascending.
    affine_on: Vec<Vec<usize>>,
    /// Smallest allowed value `>= c` that is at most `m`, by `c`.
    next: Vec<Option<u64>>,
    m: u64,
}

struct State {
    cnt: Vec<u64>,
    set: Vec<usize>,
    nodes: u64,
    found: Vec<Vec<usize>>,
}

impl Geo {
    fn need(&self, c: u64) -> Option<u64> {
        self.next.get(c as usize).copied().flatten().map(|x| x - c)
    }

    fn add(&self, st: &mut State, p: usize) -> bool {
        let ok = self.lines_of[p].iter().all(|&l| self.need(st.cnt[l] + 1).is_some());
        if ok {
            for &l in &self.lines_of[p] {
                st.cnt[l] += 1;
            }
            st.set.push(p);
        }
        ok
    }

    fn remove(&self, st: &mut State, p: usize) {
        for &l in &self.lines_of[p] {
            st.cnt[l] -= 1;
        }
        st.set.pop();
    }

    /// Whether the lines can still be completed with `left` points of id
    /// greater than `last`.
    fn feasible(&self, st: &State, last: usize, left: u64) -> bool {
        for (l, pts) in self.affine_on.iter().enumerate() {
            let need = match self.need(st.cnt[l]) {
                Some(x) => x,
                None => return false,
            };
            if need > left {
                return false;
            }
            if need > 0 {
                let avail = pts.len() - pts.partition_point(|&x| x <= last);
                if (avail as u64) < need {
                    return false;
                }
            }
        }
        // Lines through a chosen point meet only there.
        st.set.iter().all(|&x| {
            self.lines_of[x]
                .iter()
                .map(|&l| self.need(st.cnt[l]).unwrap_or(u64::MAX))
                .sum::<u64>()
                <= left
        })
    }

    fn search(&self, st: &mut State, last: usize, left: u64, naff: usize, allowed: &[u64]) {
        st.nodes += 1;
        if left == 0 {
            if st.cnt.iter().all(|c| allowed.contains(c)) {
                st.found.push(st.set.clone());
            }
            return;
        }
        if !self.feasible(st, last, left) {
            return;
        }
        for p in last + 1..naff {
            if (naff - p) < left as usize {
                break;
            }
            if self.add(st, p) {
                self.search(st, p, left - 1, naff, allowed);
                self.remove(st, p);
            }
        }
    }
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

/// All sets of `n` points in `PG(2, q)` whose line multiplicities lie in
/// `allowed`, up to equivalence.
pub fn plane_sets(q: u64, n: u64, allowed: &[u64], stretch: bool) -> Result<PlaneSearch> {
    let f = Field::with_order(q)?;
    let s = Space::new(&f, 3)?;
    let qq = q as usize;
    if n as usize > s.num_points() {
        return Ok(PlaneSearch {
            classes: Vec::new(),
            nodes: 0,
        });
    }
    if !stretch && (qq * qq) as u64 * n > PLANE_WORK {
        return Err(Error::Guard(format!(
            "plane search with q = {q}, n = {n} exceeds the default budget; pass --stretch"
        )));
    }
    let mut allowed: Vec<u64> = allowed.to_vec();
    allowed.sort_unstable();
    allowed.dedup();
    let np = s.num_points();
    // Affine points are those with x0 = 1; they come first in id order.
    let naff = qq * qq;
    debug_assert!((0..naff).all(|p| s.point(p)[0] == 1));
    let linf = s.id_of(&[1, 0, 0])?;
    let on_inf: Vec<usize> = (naff..np).collect();
    let lines_of: Vec<Vec<usize>> = (0..np)
        .map(|p| (0..np).filter(|&l| s.incident(l, p)).collect())
        .collect();
    let affine_on: Vec<Vec<usize>> = (0..np)
        .map(|l| (0..naff).filter(|&p| s.incident(l, p)).collect())
        .collect();

    let tops: Vec<u64> = allowed
        .iter()
        .copied()
        .filter(|&m| m <= n && m <= q + 1)
        .collect();
    let mut jobs = Vec::new();
    for &m in &tops {
        let mu = m as usize;
        let fixed = mu.min(3);
        for extra in subsets(&on_inf[fixed..], mu - fixed) {
            let mut line_pts: Vec<usize> = on_inf[..fixed].to_vec();
            line_pts.extend(extra);
            jobs.push((m, line_pts));
        }
    }
    let results: Vec<(Vec<Vec<usize>>, u64)> = jobs
        .par_iter()
        .map(|(m, line_pts)| {
            let next = (0..=q as usize + 2)
                .map(|c| allowed.iter().copied().find(|&a| a >= c as u64 && a <= *m))
                .collect();
            let geo = Geo {
                lines_of: lines_of.clone(),
                affine_on: affine_on.clone(),
                next,
                m: *m,
            };
            let mut st = State {
                cnt: vec![0; np],
                set: Vec::new(),
                nodes: 0,
                found: Vec::new(),
            };
            for &p in line_pts {
                if !geo.add(&mut st, p) {
                    return (Vec::new(), 0);
                }
            }
            debug_assert_eq!(st.cnt[linf], geo.m);
            let left = n - m;
            if left == 0 {
                if st.cnt.iter().all(|c| allowed.contains(c)) {
                    st.found.push(st.set.clone());
                }
            } else if geo.add(&mut st, 0) {
                geo.search(&mut st, 0, left - 1, naff, &allowed);
            }
            (st.found, st.nodes)
        })
        .collect();

    let mut nodes = 0;
    let mut classes = BTreeMap::new();
    for (found, k) in results {
        nodes += k;
        for set in found {
            let c = canonical_class(&PointMultiset::from_points(&s, set), stretch)?;
            classes.entry(c.key.clone()).or_insert(c);
        }
    }
    Ok(PlaneSearch {
        classes: classes.into_values().collect(),
        nodes,
    })
}
