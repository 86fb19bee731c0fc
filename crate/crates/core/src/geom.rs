//! Projective spaces PG(v-1, q): points, subspaces, incidence and quotients.
//!
//! A point is stored as its normalized coordinate vector (first nonzero entry
//! equal to one) and identified by a dense id. Points are ranked first by the
//! position of the leading one (earlier first), then by the remaining
//! coordinates read as a base-q number, most significant first. The first
//! point is always `(1,0,...,0)`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

/// Upper bound on the number of points of a space we are willing to tabulate.
pub const MAX_POINTS: usize = 1 << 22;

struct SpaceData {
    field: Field,
    v: usize,
    len: usize,
    coords: Vec<Elem>,
    /// `offsets[i]` is the id of the first point whose leading one sits at `i`.
    offsets: Vec<usize>,
}

/// The projective space of vector-space dimension `v` over a field.
#[derive(Clone)]
pub struct Space(Arc<SpaceData>);

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.v == other.0.v && self.0.field == other.0.field)
    }
}

impl Eq for Space {}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PG({}, {})", self.0.v as isize - 1, self.0.field.q())
    }
}

/// `[x]_q = (q^x - 1)/(q - 1)`.
pub fn bracket(x: u32, q: u64) -> u64 {
    (0..x).fold(0u64, |acc, _| acc * q + 1)
}

/// Number of `k`-dimensional subspaces of a `v`-dimensional space over GF(q).
pub fn gaussian_binomial(v: u32, k: u32, q: u64) -> u128 {
    if k > v {
        return 0;
    }
    let q = q as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q.pow(v - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

impl Space {
    pub fn new(field: &Field, v: usize) -> Result<Space> {
        if v == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        let q = field.q() as u64;
        let len = (0..v as u32).try_fold(0u64, |acc, _| acc.checked_mul(q)?.checked_add(1));
        let len = match len {
            Some(l) if l as usize <= MAX_POINTS => l as usize,
            _ => {
                return Err(Error::Guard(format!(
                    "PG({}, {}) has too many points to tabulate",
                    v - 1,
                    q
                )))
            }
        };
        let q = q as usize;
        let mut offsets = Vec::with_capacity(v);
        let mut acc = 0;
        for i in 0..v {
            offsets.push(acc);
            acc += q.pow((v - 1 - i) as u32);
        }
        let mut coords = vec![0u8; len * v];
        for i in 0..v {
            let tail = v - 1 - i;
            for t in 0..q.pow(tail as u32) {
                let id = offsets[i] + t;
                let row = &mut coords[id * v..(id + 1) * v];
                row[i] = 1;
                let mut rest = t;
                for j in (i + 1..v).rev() {
                    row[j] = (rest % q) as u8;
                    rest /= q;
                }
            }
        }
        Ok(Space(Arc::new(SpaceData {
            field: field.clone(),
            v,
            len,
            coords,
            offsets,
        })))
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.0.field
    }

    #[inline]
    pub fn v(&self) -> usize {
        self.0.v
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.0.field.q()
    }

    /// Number of points, `[v]_q`.
    #[inline]
    pub fn num_points(&self) -> usize {
        self.0.len
    }

    #[inline]
    pub fn point(&self, id: usize) -> &[Elem] {
        let v = self.0.v;
        &self.0.coords[id * v..(id + 1) * v]
    }

    /// Ids of all points in order.
    pub fn points(&self) -> std::ops::Range<usize> {
        0..self.0.len
    }

    /// Scales `vec` so that its first nonzero coordinate is one.
    pub fn normalize(&self, vec: &[Elem]) -> Result<Vec<Elem>> {
        if vec.len() != self.0.v {
            return Err(Error::DimensionMismatch {
                expected: self.0.v,
                found: vec.len(),
            });
        }
        let f = &self.0.field;
        let lead = vec.iter().find(|&&c| c != 0).ok_or(Error::ZeroVector)?;
        let s = f.inv_unchecked(*lead);
        Ok(vec.iter().map(|&c| f.mul(s, c)).collect())
    }

    /// Id of the point spanned by a nonzero vector (any scaling).
    pub fn id_of(&self, vec: &[Elem]) -> Result<usize> {
        if vec.len() != self.0.v {
            return Err(Error::DimensionMismatch {
                expected: self.0.v,
                found: vec.len(),
            });
        }
        if let Some(&c) = vec.iter().find(|&&c| (c as usize) >= self.q()) {
            return Err(Error::BadElement {
                code: c as u32,
                q: self.q(),
            });
        }
        self.id_of_vec(vec).ok_or(Error::ZeroVector)
    }

    /// Like [`Space::id_of`] without validation; `None` for the zero vector.
    #[inline]
    pub fn id_of_vec(&self, vec: &[Elem]) -> Option<usize> {
        let f = &self.0.field;
        let q = f.q();
        let i = vec.iter().position(|&c| c != 0)?;
        let s = f.inv_unchecked(vec[i]);
        let mut t = 0usize;
        for &c in &vec[i + 1..] {
            t = t * q + f.mul(s, c) as usize;
        }
        Some(self.0.offsets[i] + t)
    }

    /// Incidence of point `p` with the hyperplane whose normal is point `h`.
    #[inline]
    pub fn incident(&self, h: usize, p: usize) -> bool {
        self.0.field.dot(self.point(h), self.point(p)) == 0
    }

    /// The hyperplane with normal `h` as a subspace.
    pub fn hyperplane(&self, h: usize) -> Subspace {
        Subspace::annihilator_of(self, &[self.point(h).to_vec()])
    }

    /// Coordinate vector with a one in position `i`.
    pub fn unit(&self, i: usize) -> Vec<Elem> {
        let mut e = vec![0; self.0.v];
        e[i] = 1;
        e
    }
}

/// Normalizes a nonzero vector over `field`.
pub fn normalize(field: &Field, vec: &[Elem]) -> Result<Vec<Elem>> {
    let lead = vec.iter().find(|&&c| c != 0).ok_or(Error::ZeroVector)?;
    let s = field.inv_unchecked(*lead);
    Ok(vec.iter().map(|&c| field.mul(s, c)).collect())
}

/// All points of PG(v-1, q) in id order.
pub fn enumerate_points(field: &Field, v: usize) -> Result<Vec<Vec<Elem>>> {
    let s = Space::new(field, v)?;
    Ok(s.points().map(|p| s.point(p).to_vec()).collect())
}

// ---------------------------------------------------------------------------
// Dense linear algebra over GF(q).

/// Row-reduces `rows` in place to reduced row-echelon form, dropping zero rows.
/// Returns the pivot columns.
pub fn rref(f: &Field, rows: &mut Vec<Vec<Elem>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else {
            continue;
        };
        rows.swap(r, k);
        let s = f.inv_unchecked(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = f.mul(s, *x);
        }
        for k in 0..rows.len() {
            if k != r && rows[k][c] != 0 {
                let m = f.neg(rows[k][c]);
                for j in 0..ncols {
                    let t = f.mul(m, rows[r][j]);
                    rows[k][j] = f.add(rows[k][j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

pub fn rank(f: &Field, rows: &[Vec<Elem>]) -> usize {
    let mut m = rows.to_vec();
    rref(f, &mut m).len()
}

/// Inverse of a square matrix, if it is invertible.
pub fn inverse(f: &Field, m: &[Vec<Elem>]) -> Option<Vec<Vec<Elem>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Elem>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| (i == j) as u8));
            r
        })
        .collect();
    let piv = rref(f, &mut aug);
    if piv.len() != n || piv.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `m * x` for a matrix given by rows.
pub fn mat_vec(f: &Field, m: &[Vec<Elem>], x: &[Elem]) -> Vec<Elem> {
    m.iter().map(|row| f.dot(row, x)).collect()
}

/// Basis of `{x : row . x = 0 for every row}` in dimension `v`.
pub fn null_space(f: &Field, rows: &[Vec<Elem>], v: usize) -> Vec<Vec<Elem>> {
    let mut m = rows.to_vec();
    let pivots = rref(f, &mut m);
    let free: Vec<usize> = (0..v).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut x = vec![0u8; v];
            x[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = f.neg(m[r][fc]);
            }
            x
        })
        .collect()
}

/// Iterates all vectors of `GF(q)^len` in odometer order (last entry fastest).
pub(crate) fn for_each_vector(q: usize, len: usize, mut visit: impl FnMut(&[Elem])) {
    let mut x = vec![0u8; len];
    loop {
        visit(&x);
        let mut i = len;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            x[i] += 1;
            if (x[i] as usize) < q {
                break;
            }
            x[i] = 0;
        }
    }
}

// ---------------------------------------------------------------------------

/// A linear subspace, stored as its reduced row-echelon basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    v: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            for c in r {
                write!(f, "{c}")?;
            }
        }
        write!(f, ">")
    }
}

impl Subspace {
    /// The zero subspace of a `v`-dimensional space.
    pub fn zero(v: usize) -> Subspace {
        Subspace {
            v,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(space: &Space) -> Subspace {
        Subspace::from_vectors(space, (0..space.v()).map(|i| space.unit(i)).collect())
    }

    /// Linear hull of arbitrary vectors (zero vectors allowed).
    pub fn from_vectors(space: &Space, mut rows: Vec<Vec<Elem>>) -> Subspace {
        let pivots = rref(space.field(), &mut rows);
        Subspace {
            v: space.v(),
            rows,
            pivots,
        }
    }

    /// Linear hull of a list of points.
    pub fn span(space: &Space, points: &[usize]) -> Subspace {
        Subspace::from_vectors(space, points.iter().map(|&p| space.point(p).to_vec()).collect())
    }

    /// `{x : n . x = 0 for all n in normals}`.
    pub fn annihilator_of(space: &Space, normals: &[Vec<Elem>]) -> Subspace {
        Subspace::from_vectors(space, null_space(space.field(), normals, space.v()))
    }

    /// The orthogonal complement with respect to the standard dot product.
    pub fn annihilator(&self, space: &Space) -> Subspace {
        Subspace::annihilator_of(space, &self.rows)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.v
    }

    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `x` modulo the subspace, clearing the pivot columns.
    pub fn reduce(&self, f: &Field, x: &mut [Elem]) {
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            if x[c] != 0 {
                let m = f.neg(x[c]);
                for (xi, &ri) in x.iter_mut().zip(row) {
                    *xi = f.add(*xi, f.mul(m, ri));
                }
            }
        }
    }

    pub fn contains_vec(&self, f: &Field, x: &[Elem]) -> bool {
        let mut y = x.to_vec();
        self.reduce(f, &mut y);
        y.iter().all(|&c| c == 0)
    }

    pub fn contains_point(&self, space: &Space, p: usize) -> bool {
        self.contains_vec(space.field(), space.point(p))
    }

    /// Coordinates of a vector of the subspace with respect to the RREF basis.
    pub fn coordinates(&self, x: &[Elem]) -> Vec<Elem> {
        self.pivots.iter().map(|&c| x[c]).collect()
    }

    /// The vector `sum c_i * row_i`.
    pub fn combine(&self, f: &Field, c: &[Elem]) -> Vec<Elem> {
        let mut x = vec![0u8; self.v];
        for (row, &ci) in self.rows.iter().zip(c) {
            if ci != 0 {
                for (xi, &ri) in x.iter_mut().zip(row) {
                    *xi = f.add(*xi, f.mul(ci, ri));
                }
            }
        }
        x
    }

    /// Ids of all points of the subspace, ascending.
    pub fn points(&self, space: &Space) -> Vec<usize> {
        let d = self.dim();
        if d == 0 {
            return Vec::new();
        }
        let f = space.field();
        let mut out = Vec::with_capacity(bracket(d as u32, f.q() as u64) as usize);
        // Normalized coefficient vectors give normalized points directly,
        // since the basis is in reduced echelon form.
        for lead in 0..d {
            for_each_vector(f.q(), d - lead - 1, |tail| {
                let mut c = vec![0u8; d];
                c[lead] = 1;
                c[lead + 1..].copy_from_slice(tail);
                let x = self.combine(f, &c);
                out.push(space.id_of_vec(&x).expect("nonzero"));
            });
        }
        out.sort_unstable();
        out
    }

    /// All `q^dim` vectors of the subspace.
    pub fn vectors(&self, f: &Field) -> Vec<Vec<Elem>> {
        let mut out = Vec::new();
        for_each_vector(f.q(), self.dim(), |c| out.push(self.combine(f, c)));
        out
    }

    /// The sum of two subspaces.
    pub fn join(&self, space: &Space, other: &Subspace) -> Subspace {
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Subspace::from_vectors(space, rows)
    }

    /// The subspace spanned by this one and a vector.
    pub fn join_vec(&self, space: &Space, x: &[Elem]) -> Subspace {
        let mut rows = self.rows.clone();
        rows.push(x.to_vec());
        Subspace::from_vectors(space, rows)
    }

    pub fn intersect(&self, space: &Space, other: &Subspace) -> Subspace {
        let mut normals = self.annihilator(space).rows;
        normals.extend(other.annihilator(space).rows);
        Subspace::annihilator_of(space, &normals)
    }

    pub fn is_subspace_of(&self, f: &Field, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains_vec(f, r))
    }
}

/// All `d`-dimensional subspaces of `GF(q)^v`, each exactly once.
pub fn enumerate_subspaces(space: &Space, d: usize) -> Vec<Subspace> {
    let v = space.v();
    let q = space.q();
    let mut out = Vec::new();
    if d > v {
        return out;
    }
    let mut pivots: Vec<usize> = (0..d).collect();
    loop {
        // Free positions: (row, col) with col > pivot of row, col not a pivot.
        let free: Vec<(usize, usize)> = (0..d)
            .flat_map(|r| {
                let pv = &pivots;
                (pv[r] + 1..v)
                    .filter(move |c| !pv.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        for_each_vector(q, free.len(), |vals| {
            let mut rows = vec![vec![0u8; v]; d];
            for (r, &c) in pivots.iter().enumerate() {
                rows[r][c] = 1;
            }
            for (&(r, c), &x) in free.iter().zip(vals) {
                rows[r][c] = x;
            }
            out.push(Subspace {
                v,
                rows,
                pivots: pivots.clone(),
            });
        });
        // Next d-combination of 0..v.
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] < v - d + i {
                pivots[i] += 1;
                for j in i + 1..d {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All subspaces of codimension `j`, as annihilators of `j`-dimensional
/// subspaces of the dual space (same order as those).
pub fn enumerate_codim(space: &Space, j: usize) -> Vec<Subspace> {
    enumerate_subspaces(space, j)
        .into_iter()
        .map(|w| w.annihilator(space))
        .collect()
}

/// Normals (point ids in the dual space) of the `q+1` hyperplanes through a
/// subspace of codimension two.
pub fn hyperplanes_through(space: &Space, k: &Subspace) -> Result<Vec<usize>> {
    if k.dim() + 2 != space.v() {
        return Err(Error::DimensionMismatch {
            expected: space.v() - 2,
            found: k.dim(),
        });
    }
    Ok(k.annihilator(space).points(space))
}

/// The affine part `<P,F> \ F`.
pub fn affine_part(space: &Space, p: usize, f_sub: &Subspace) -> Result<Vec<usize>> {
    let f = space.field();
    if f_sub.contains_point(space, p) {
        return Err(Error::PointInSubspace);
    }
    let base = space.point(p);
    let mut out: Vec<usize> = f_sub
        .vectors(f)
        .iter()
        .map(|w| {
            let x: Vec<Elem> = base.iter().zip(w).map(|(&a, &b)| f.add(a, b)).collect();
            space.id_of_vec(&x).expect("outside F")
        })
        .collect();
    out.sort_unstable();
    Ok(out)
}
