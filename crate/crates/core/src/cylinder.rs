//! Cylinders: construction, recognition, lifting and field reduction.

use std::collections::{BTreeMap, BTreeSet};

use crate::analysis::PointMultiset;
use crate::error::{Error, Result};
use crate::geom::{affine_part, enumerate_subspaces, Space, Subspace};
use crate::gf::{subfield_embedding, Elem, Field};

/// Axis `F` and one representative per affine part `A(rep, F)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderWitness {
    pub axis: Subspace,
    pub reps: Vec<usize>,
    pub parts: Vec<Vec<usize>>,
}

/// Builds the cylinder over `base` (q points, repeats allowed) with an axis
/// spanned by `r` new trailing coordinates.
pub fn construct_cylinder(base: &PointMultiset, r: usize) -> Result<(PointMultiset, CylinderWitness)> {
    let q = base.q();
    if base.n() != q as u64 {
        return Err(Error::CardinalityMismatch {
            expected: q as u64,
            found: base.n(),
        });
    }
    let v0 = base.v();
    let s = Space::new(base.field(), v0 + r)?;
    let axis = Subspace::from_vectors(&s, (0..r).map(|i| s.unit(v0 + i)).collect());
    let mut out = PointMultiset::new(&s);
    let mut reps = Vec::new();
    let mut parts = Vec::new();
    for (id, m) in base.iter() {
        let mut x = base.space().point(id).to_vec();
        x.resize(v0 + r, 0);
        let rep = s.id_of_vec(&x).expect("nonzero");
        let part = affine_part(&s, rep, &axis)?;
        for &p in &part {
            out.add(p, m);
        }
        for _ in 0..m {
            reps.push(rep);
            parts.push(part.clone());
        }
    }
    Ok((out, CylinderWitness { axis, reps, parts }))
}

/// Points `P` outside `S` such that `A(s, P)` lies in `S` for some `s`, i.e.
/// the missing point of every line meeting `S` in exactly `q` points.
pub fn direction_set(s: &PointMultiset) -> Result<Vec<usize>> {
    line_directions(s, false)
}

/// Points `P` with `A(s, P)` inside `S` for some `s` in `S`; with `inner`
/// set, points of `S` itself qualify too.
fn line_directions(s: &PointMultiset, inner: bool) -> Result<Vec<usize>> {
    s.require_set()?;
    let space = s.space();
    let pts = s.support();
    let mut out = BTreeSet::new();
    let mut seen_lines = BTreeSet::new();
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            let line = Subspace::span(space, &[a, b]);
            if !seen_lines.insert(line.rows().to_vec()) {
                continue;
            }
            let on: Vec<usize> = line.points(space);
            let missing: Vec<usize> = on.iter().copied().filter(|&p| !s.contains(p)).collect();
            match missing.len() {
                0 if inner => out.extend(on),
                1 => {
                    out.insert(missing[0]);
                }
                _ => {}
            }
        }
    }
    Ok(out.into_iter().collect())
}

fn check_cylinder_input(s: &PointMultiset, r: usize) -> Result<()> {
    s.require_set()?;
    let want = (s.q() as u64).pow(r as u32 + 1);
    if s.n() != want {
        return Err(Error::CardinalityMismatch {
            expected: want,
            found: s.n(),
        });
    }
    Ok(())
}

/// Checks whether `axis` witnesses `s` as a cylinder.
pub fn witness_for_axis(s: &PointMultiset, axis: &Subspace) -> Option<CylinderWitness> {
    let space = s.space();
    let q = s.q();
    if axis.points(space).iter().any(|&p| s.contains(p)) {
        return None;
    }
    let mut parts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for p in s.support() {
        if parts.values().any(|&rep| affine_part(space, rep, axis).is_ok_and(|a| a.binary_search(&p).is_ok())) {
            continue;
        }
        let a = affine_part(space, p, axis).ok()?;
        if !a.iter().all(|&x| s.contains(x)) {
            return None;
        }
        parts.insert(a, p);
        if parts.len() > q {
            return None;
        }
    }
    if parts.len() != q {
        return None;
    }
    let (parts, reps): (Vec<Vec<usize>>, Vec<usize>) = parts.into_iter().unzip();
    Some(CylinderWitness {
        axis: axis.clone(),
        reps,
        parts,
    })
}

/// Subspaces of dimension `d` all of whose points lie in `dirs`, built by
/// adding one direction at a time.
fn subspaces_within(space: &Space, dirs: &[usize], d: usize) -> Vec<Subspace> {
    let inside: BTreeSet<usize> = dirs.iter().copied().collect();
    let mut level: BTreeSet<Subspace> = BTreeSet::new();
    level.insert(Subspace::zero(space.v()));
    for _ in 0..d {
        let mut next = BTreeSet::new();
        for w in &level {
            for &p in dirs {
                if w.contains_point(space, p) {
                    continue;
                }
                let u = w.join_vec(space, space.point(p));
                if next.contains(&u) {
                    continue;
                }
                if u.points(space).iter().all(|x| inside.contains(x)) {
                    next.insert(u);
                }
            }
        }
        level = next;
    }
    level.into_iter().collect()
}

/// A cylinder witness with an `r`-dimensional axis, or `None`. Axis
/// candidates are subspaces inside the direction set; the least valid axis is
/// returned.
pub fn recognize_cylinder(s: &PointMultiset, r: usize) -> Result<Option<CylinderWitness>> {
    check_cylinder_input(s, r)?;
    let dirs = direction_set(s)?;
    Ok(subspaces_within(s.space(), &dirs, r)
        .iter()
        .find_map(|f| witness_for_axis(s, f)))
}

/// Same as [`recognize_cylinder`] but tries every `r`-space as the axis.
pub fn recognize_cylinder_exhaustive(s: &PointMultiset, r: usize) -> Result<Option<CylinderWitness>> {
    check_cylinder_input(s, r)?;
    if s.v() > 6 {
        return Err(Error::Guard("exhaustive recognition needs v <= 6".into()));
    }
    let mut axes = enumerate_subspaces(s.space(), r);
    axes.sort();
    Ok(axes.iter().find_map(|f| witness_for_axis(s, f)))
}

/// `{A(s, P) : s in S}` with `P` the new last coordinate point.
pub fn lift(s: &PointMultiset) -> Result<PointMultiset> {
    let v = s.v();
    let space = Space::new(s.field(), v + 1)?;
    let mut out = PointMultiset::new(&space);
    for (id, m) in s.iter() {
        let mut x = s.space().point(id).to_vec();
        x.push(0);
        for t in s.field().elements() {
            x[v] = t;
            out.add(space.id_of_vec(&x).expect("nonzero"), m);
        }
    }
    Ok(out)
}

/// Coordinatewise image of `s` over GF(q^h), same `v`.
pub fn subfield_embed(s: &PointMultiset, h: u32) -> Result<PointMultiset> {
    if h < 2 {
        return Err(Error::InvalidArgument("embedding degree must be at least 2".into()));
    }
    let base = s.field();
    let ext = Field::new(base.p(), base.h() * h, None)?;
    let emb = subfield_embedding(base, &ext)?;
    let space = Space::new(&ext, s.v())?;
    let mut out = PointMultiset::new(&space);
    for (id, m) in s.iter() {
        let y: Vec<Elem> = s.space().point(id).iter().map(|&a| emb.apply(a)).collect();
        out.add(space.id_of_vec(&y).expect("nonzero"), m);
    }
    Ok(out)
}

/// A `d`-space `T` and a `(d-1)`-space `F` inside it with `T \ F` in `S`.
/// `F` may meet `S`.
pub fn contains_affine_subspace(s: &PointMultiset, d: usize) -> Result<Option<(Subspace, Subspace)>> {
    s.require_set()?;
    if d == 0 {
        return Ok(None);
    }
    let space = s.space();
    // Every point of F lies on a line whose other points are all in S.
    let dirs = line_directions(s, true)?;
    for f in subspaces_within(space, &dirs, d - 1) {
        if let Some(w) = affine_witness(s, &f) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn affine_witness(s: &PointMultiset, f: &Subspace) -> Option<(Subspace, Subspace)> {
    let space = s.space();
    for p in s.support() {
        if f.contains_point(space, p) {
            continue;
        }
        let a = affine_part(space, p, f).ok()?;
        if a.iter().all(|&x| s.contains(x)) {
            return Some((f.join_vec(space, space.point(p)), f.clone()));
        }
    }
    None
}

/// Exhaustive variant of [`contains_affine_subspace`] over all `(d-1)`-spaces.
pub fn contains_affine_subspace_exhaustive(s: &PointMultiset, d: usize) -> Result<Option<(Subspace, Subspace)>> {
    s.require_set()?;
    if d == 0 {
        return Ok(None);
    }
    let mut fs = enumerate_subspaces(s.space(), d - 1);
    fs.sort();
    Ok(fs.iter().find_map(|f| affine_witness(s, f)))
}

/// Spanning `(r+1)`-cylinder sets exist in `PG(v-1, q)` iff `r+2 <= v <= r+q`.
pub fn spanning_cylinder_exists(v: usize, r: usize, q: usize) -> bool {
    r + 2 <= v && v <= r + q
}

/// A spanning `(r+1)`-cylinder set in `PG(v-1, q)`, when one exists: the base
/// is a basis of `GF(q)^{v-r}` padded with further points.
pub fn spanning_cylinder(field: &Field, v: usize, r: usize) -> Result<Option<PointMultiset>> {
    let q = field.q();
    if !spanning_cylinder_exists(v, r, q) {
        return Ok(None);
    }
    let bs = Space::new(field, v - r)?;
    let mut ids: Vec<usize> = (0..v - r).map(|i| bs.id_of_vec(&bs.unit(i)).unwrap()).collect();
    for p in bs.points() {
        if ids.len() == q {
            break;
        }
        if !ids.contains(&p) {
            ids.push(p);
        }
    }
    Ok(Some(construct_cylinder(&PointMultiset::from_points(&bs, ids), r)?.0))
}

/// The hyperplane `H` with `S = PG \ H`, when `S` is an affine geometry.
pub fn affine_geometry_hyperplane(s: &PointMultiset) -> Option<usize> {
    if !s.is_set() || s.n() != (s.q() as u64).pow(s.v() as u32 - 1) {
        return None;
    }
    let space = s.space();
    space
        .points()
        .find(|&h| s.support().iter().all(|&p| !space.incident(h, p)))
}
