//! Exact rational machinery for the standard equations of a spectrum.
//!
//! Variables are spectrum entries `a_i` named by their raw multiplicity `i`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::geom::bracket;

/// Where a system came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    Standard,
    Divisible,
    PlaneLine,
}

/// A linear system `rows * a = rhs` over the variables `vars`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSystem {
    pub kind: SystemKind,
    pub vars: Vec<u64>,
    pub rows: Vec<Vec<BigRational>>,
    pub rhs: Vec<BigRational>,
}

fn rat(x: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn pow(q: u64, e: u32) -> i128 {
    (q as i128).pow(e)
}

impl ExactSystem {
    fn new(kind: SystemKind, vars: Vec<u64>) -> ExactSystem {
        ExactSystem {
            kind,
            vars,
            rows: Vec::new(),
            rhs: Vec::new(),
        }
    }

    fn push_row(&mut self, coeff: impl Fn(u64) -> i128, rhs: i128) {
        self.rows.push(self.vars.iter().map(|&i| rat(coeff(i))).collect());
        self.rhs.push(rat(rhs));
    }

    pub fn position(&self, var: u64) -> Option<usize> {
        self.vars.iter().position(|&v| v == var)
    }

    /// Keeps only the variables in `allowed`; the others are fixed to zero.
    pub fn restrict(&self, allowed: &[u64]) -> ExactSystem {
        let keep: Vec<usize> = (0..self.vars.len())
            .filter(|&j| allowed.contains(&self.vars[j]))
            .collect();
        ExactSystem {
            kind: self.kind,
            vars: keep.iter().map(|&j| self.vars[j]).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| keep.iter().map(|&j| r[j].clone()).collect())
                .collect(),
            rhs: self.rhs.clone(),
        }
    }

    /// Residuals `rows * x - rhs` for an assignment (missing variables are 0).
    pub fn residuals(&self, assignment: &BTreeMap<u64, BigInt>) -> Vec<BigRational> {
        self.rows
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| {
                let mut s = -b.clone();
                for (c, var) in row.iter().zip(&self.vars) {
                    if let Some(x) = assignment.get(var) {
                        s += c * BigRational::from_integer(x.clone());
                    }
                }
                s
            })
            .collect()
    }

    pub fn is_satisfied_by(&self, assignment: &BTreeMap<u64, BigInt>) -> bool {
        self.residuals(assignment).iter().all(Zero::is_zero)
    }
}

/// The three standard equations for `n` points in PG(v-1, q), over the
/// variables `a_0..a_n`. With `spanning` the row `a_n = 0` is appended.
pub fn standard_system(n: u64, v: u32, q: u64, spanning: bool) -> Result<ExactSystem> {
    if v < 2 {
        return Err(Error::InvalidArgument("v must be at least 2".into()));
    }
    let mut sys = ExactSystem::new(SystemKind::Standard, (0..=n).collect());
    let n = n as i128;
    sys.push_row(|_| 1, bracket(v, q) as i128);
    sys.push_row(|i| i as i128, n * bracket(v - 1, q) as i128);
    sys.push_row(
        |i| (i as i128) * (i as i128 - 1) / 2,
        n * (n - 1) / 2 * bracket(v - 2, q) as i128,
    );
    if spanning {
        sys.push_row(|i| (i as i128 == n) as i128, 0);
    }
    Ok(sys)
}

/// The standard equations of a `q^r`-divisible set of `q^{r+1}` points in
/// PG(v-1, q), scaled to integer form, over `a_{i q^r}` for `i = 0..q-1`.
pub fn divisible_system(v: u32, r: u32, q: u64) -> Result<ExactSystem> {
    if v < r + 2 {
        return Err(Error::InvalidArgument("need v >= r + 2".into()));
    }
    let qr = q.pow(r);
    let mut sys = ExactSystem::new(SystemKind::Divisible, (0..q).map(|i| i * qr).collect());
    let qi = q as i128;
    let qr = qr as i128;
    sys.push_row(|_| qi - 1, pow(q, v) - 1);
    sys.push_row(|x| (qi - 1) * (x as i128 / qr), qi * (pow(q, v - 1) - 1));
    sys.push_row(
        |x| {
            let i = x as i128 / qr;
            (qi - 1) * i * (i * qr - 1)
        },
        qi * (pow(q, r + 1) - 1) * (pow(q, v - 2) - 1),
    );
    Ok(sys)
}

/// Line multiplicities of `n` points in PG(2, q), restricted to `allowed`.
pub fn plane_line_system(q: u64, n: u64, allowed: &[u64]) -> Result<ExactSystem> {
    if n > q * q + q + 1 {
        return Err(Error::InvalidArgument("too many points for a plane".into()));
    }
    let mut sys = standard_system(n, 3, q, false)?.restrict(allowed);
    sys.kind = SystemKind::PlaneLine;
    Ok(sys)
}

// ---------------------------------------------------------------------------

/// A single-variable constraint `a_i = c`, `a_i <= c` or `a_i >= c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Constraint {
    Eq(u64, i64),
    Le(u64, i64),
    Ge(u64, i64),
}

impl Constraint {
    pub fn var(&self) -> u64 {
        match *self {
            Constraint::Eq(i, _) | Constraint::Le(i, _) | Constraint::Ge(i, _) => i,
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Eq(i, c) => write!(f, "a{i}={c}"),
            Constraint::Le(i, c) => write!(f, "a{i}<={c}"),
            Constraint::Ge(i, c) => write!(f, "a{i}>={c}"),
        }
    }
}

impl FromStr for Constraint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Constraint> {
        let bad = || Error::InvalidArgument(format!("cannot parse constraint '{s}'"));
        let t = s.trim();
        let rest = t.strip_prefix('a').ok_or_else(bad)?;
        let (idx, op, val) = if let Some(p) = rest.find("<=") {
            (&rest[..p], "<=", &rest[p + 2..])
        } else if let Some(p) = rest.find(">=") {
            (&rest[..p], ">=", &rest[p + 2..])
        } else if let Some(p) = rest.find('=') {
            (&rest[..p], "=", &rest[p + 1..])
        } else {
            return Err(bad());
        };
        let i: u64 = idx.trim().parse().map_err(|_| bad())?;
        let c: i64 = val.trim().parse().map_err(|_| bad())?;
        Ok(match op {
            "=" => Constraint::Eq(i, c),
            "<=" => Constraint::Le(i, c),
            _ => Constraint::Ge(i, c),
        })
    }
}

/// Parses a comma-separated constraint list.
pub fn parse_constraints(s: &str) -> Result<Vec<Constraint>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(str::parse)
        .collect()
}

/// A nonnegative integer solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumSolution {
    pub assignment: BTreeMap<u64, BigInt>,
}

impl SpectrumSolution {
    pub fn get(&self, var: u64) -> i64 {
        self.assignment
            .get(&var)
            .and_then(|x| x.to_i64())
            .unwrap_or(0)
    }

    pub fn values(&self, vars: &[u64]) -> Vec<i64> {
        vars.iter().map(|&v| self.get(v)).collect()
    }
}

// ---------------------------------------------------------------------------
// Rational elimination helpers.

/// Reduced row-echelon form of an augmented matrix (last column = rhs).
/// Returns pivot columns, or `None` if the system is inconsistent.
fn rref_aug(m: &mut Vec<Vec<BigRational>>, ncols: usize) -> Option<Vec<usize>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..m.len()).find(|&k| !m[k][c].is_zero()) else {
            continue;
        };
        m.swap(r, k);
        let s = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &s;
        }
        for k in 0..m.len() {
            if k != r && !m[k][c].is_zero() {
                let f = m[k][c].clone();
                for j in 0..=ncols {
                    let t = &f * &m[r][j];
                    m[k][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    m.truncate(r);
    Some(pivots)
}

/// Solves a square system; `None` if singular.
fn solve_square(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let piv = rref_aug(&mut m, n)?;
    if piv.len() != n {
        return None;
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

fn combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Optimises `c . x` over `{x >= 0 : A x = b}` by enumerating basic solutions.
/// Also scans extreme rays to detect unboundedness.
fn lp_optimum(
    a: &[Vec<BigRational>],
    b: &[BigRational],
    c: &[BigRational],
    maximize: bool,
) -> Result<BigRational> {
    let nvars = c.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let pivots = rref_aug(&mut m, nvars).ok_or(Error::Infeasible)?;
    let rank = pivots.len();
    let a: Vec<Vec<BigRational>> = m.iter().map(|r| r[..nvars].to_vec()).collect();
    let b: Vec<BigRational> = m.iter().map(|r| r[nvars].clone()).collect();
    let better = |x: &BigRational, y: &BigRational| if maximize { x > y } else { x < y };

    let mut best: Option<BigRational> = None;
    if rank == 0 {
        // Only x = 0 style constraints; the origin is feasible.
        best = Some(BigRational::zero());
    } else {
        combinations(nvars, rank, |cols| {
            let sub: Vec<Vec<BigRational>> = a
                .iter()
                .map(|r| cols.iter().map(|&j| r[j].clone()).collect())
                .collect();
            if let Some(xb) = solve_square(&sub, &b) {
                if xb.iter().all(|x| !x.is_negative()) {
                    let val: BigRational = cols.iter().zip(&xb).map(|(&j, x)| &c[j] * x).sum();
                    if best.as_ref().is_none_or(|bv| better(&val, bv)) {
                        best = Some(val);
                    }
                }
            }
        });
    }
    let best = best.ok_or(Error::Infeasible)?;

    // Extreme rays of the recession cone: basic solutions of A d = 0, 1.d = 1.
    let mut ray_rows = a.clone();
    ray_rows.push(vec![BigRational::one(); nvars]);
    let mut ray_rhs = vec![BigRational::zero(); a.len()];
    ray_rhs.push(BigRational::one());
    let mut unbounded = false;
    let ray_rank = rank + 1;
    if ray_rank <= nvars {
        combinations(nvars, ray_rank, |cols| {
            if unbounded {
                return;
            }
            let sub: Vec<Vec<BigRational>> = ray_rows
                .iter()
                .map(|r| cols.iter().map(|&j| r[j].clone()).collect())
                .collect();
            // The ray system has rank+1 rows; it is square here.
            if let Some(d) = solve_square(&sub, &ray_rhs) {
                if d.iter().all(|x| !x.is_negative()) {
                    let gain: BigRational = cols.iter().zip(&d).map(|(&j, x)| &c[j] * x).sum();
                    if (maximize && gain.is_positive()) || (!maximize && gain.is_negative()) {
                        unbounded = true;
                    }
                }
            }
        });
    }
    if unbounded {
        return Err(Error::Unbounded);
    }
    Ok(best)
}

/// Direction of an LP bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Min,
    Max,
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Direction> {
        match s {
            "min" => Ok(Direction::Min),
            "max" => Ok(Direction::Max),
            _ => Err(Error::InvalidArgument(format!("expected min or max, got '{s}'"))),
        }
    }
}

/// Exact optimum of `a_index` over the nonnegative real solutions of `sys`.
pub fn bound_spectrum_value(sys: &ExactSystem, index: u64, dir: Direction) -> Result<BigRational> {
    let j = sys
        .position(index)
        .ok_or_else(|| Error::InvalidArgument(format!("a{index} is not a variable")))?;
    let mut c = vec![BigRational::zero(); sys.vars.len()];
    c[j] = BigRational::one();
    lp_optimum(&sys.rows, &sys.rhs, &c, dir == Direction::Max)
}

/// The system with bounds folded in: variables are shifted by their lower
/// bounds and finite upper bounds get slack columns. Returns the LP data and
/// the shift of each original variable.
struct Bounded {
    a: Vec<Vec<BigRational>>,
    b: Vec<BigRational>,
    shift: Vec<BigRational>,
    nvars: usize,
}

fn bounded_form(sys: &ExactSystem, lo: &[i128], hi: &[Option<i128>]) -> Bounded {
    let nvars = sys.vars.len();
    let uppers: Vec<usize> = (0..nvars).filter(|&j| hi[j].is_some()).collect();
    let total = nvars + uppers.len();
    let shift: Vec<BigRational> = lo.iter().map(|&l| rat(l)).collect();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (row, rhs) in sys.rows.iter().zip(&sys.rhs) {
        let mut r = row.clone();
        r.resize(total, BigRational::zero());
        let adj: BigRational = row.iter().zip(&shift).map(|(x, s)| x * s).sum();
        a.push(r);
        b.push(rhs - adj);
    }
    for (k, &j) in uppers.iter().enumerate() {
        let mut r = vec![BigRational::zero(); total];
        r[j] = BigRational::one();
        r[nvars + k] = BigRational::one();
        a.push(r);
        b.push(rat(hi[j].unwrap() - lo[j]));
    }
    Bounded {
        a,
        b,
        shift,
        nvars,
    }
}

/// All nonnegative integer solutions of `sys`, with variables outside
/// `allowed` (when given) forced to zero and the extra constraints applied.
pub fn enumerate_integer_spectra(
    sys: &ExactSystem,
    allowed: Option<&[u64]>,
    extra: &[Constraint],
) -> Result<Vec<SpectrumSolution>> {
    let sys = match allowed {
        Some(al) => sys.restrict(al),
        None => sys.clone(),
    };
    let nvars = sys.vars.len();
    let mut lo = vec![0i128; nvars];
    let mut hi: Vec<Option<i128>> = vec![None; nvars];
    for c in extra {
        let Some(j) = sys.position(c.var()) else {
            // A constraint on an absent (zero) variable.
            let ok = match *c {
                Constraint::Eq(_, x) => x == 0,
                Constraint::Le(_, x) => x >= 0,
                Constraint::Ge(_, x) => x <= 0,
            };
            if ok {
                continue;
            }
            return Ok(Vec::new());
        };
        match *c {
            Constraint::Eq(_, x) => {
                lo[j] = lo[j].max(x as i128);
                hi[j] = Some(hi[j].map_or(x as i128, |h| h.min(x as i128)));
            }
            Constraint::Le(_, x) => hi[j] = Some(hi[j].map_or(x as i128, |h| h.min(x as i128))),
            Constraint::Ge(_, x) => lo[j] = lo[j].max(x as i128),
        }
    }
    if (0..nvars).any(|j| hi[j].is_some_and(|h| h < lo[j])) {
        return Ok(Vec::new());
    }

    // Pivot variables as affine functions of the free ones.
    let mut m: Vec<Vec<BigRational>> = sys
        .rows
        .iter()
        .zip(&sys.rhs)
        .map(|(r, x)| {
            let mut r = r.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let Some(pivots) = rref_aug(&mut m, nvars) else {
        return Ok(Vec::new());
    };
    let free: Vec<usize> = (0..nvars).filter(|j| !pivots.contains(j)).collect();

    // Bounds on each free variable from the LP relaxation.
    let bf = bounded_form(&sys, &lo, &hi);
    let mut ranges = Vec::with_capacity(free.len());
    for &j in &free {
        let mut c = vec![BigRational::zero(); bf.a[0].len()];
        c[j] = BigRational::one();
        let min = match lp_optimum(&bf.a, &bf.b, &c, false) {
            Ok(x) => x,
            Err(Error::Infeasible) => return Ok(Vec::new()),
            Err(e) => return Err(e),
        };
        let max = lp_optimum(&bf.a, &bf.b, &c, true)?;
        let lo_j = (min + &bf.shift[j]).ceil().to_integer();
        let hi_j = (max + &bf.shift[j]).floor().to_integer();
        ranges.push((lo_j.to_i128().unwrap(), hi_j.to_i128().unwrap()));
    }
    debug_assert_eq!(bf.nvars, nvars);

    // x_p = beta_p - sum_f alpha_pf x_f
    let beta: Vec<BigRational> = m.iter().map(|r| r[nvars].clone()).collect();
    let alpha: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| free.iter().map(|&f| r[f].clone()).collect())
        .collect();

    let mut out = Vec::new();
    let mut vals = vec![0i128; free.len()];
    let ctx = Ctx {
        pivots: &pivots,
        free: &free,
        beta: &beta,
        alpha: &alpha,
        ranges: &ranges,
        lo: &lo,
        hi: &hi,
        vars: &sys.vars,
    };
    ctx.search(0, &mut vals, &mut out);
    Ok(out)
}

struct Ctx<'a> {
    pivots: &'a [usize],
    free: &'a [usize],
    beta: &'a [BigRational],
    alpha: &'a [Vec<BigRational>],
    ranges: &'a [(i128, i128)],
    lo: &'a [i128],
    hi: &'a [Option<i128>],
    vars: &'a [u64],
}

impl Ctx<'_> {
    /// Interval check on each pivot given the first `k` free values.
    fn feasible(&self, k: usize, vals: &[i128]) -> bool {
        for (p, &pc) in self.pivots.iter().enumerate() {
            let mut min = self.beta[p].clone();
            let mut max = self.beta[p].clone();
            for (f, a) in self.alpha[p].iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                if f < k {
                    let t = a * rat(vals[f]);
                    min -= &t;
                    max -= t;
                } else {
                    let (l, h) = self.ranges[f];
                    let tl = a * rat(l);
                    let th = a * rat(h);
                    if a.is_positive() {
                        min -= th;
                        max -= tl;
                    } else {
                        min -= tl;
                        max -= th;
                    }
                }
            }
            if max < rat(self.lo[pc]) {
                return false;
            }
            if let Some(h) = self.hi[pc] {
                if min > rat(h) {
                    return false;
                }
            }
        }
        true
    }

    fn search(&self, k: usize, vals: &mut Vec<i128>, out: &mut Vec<SpectrumSolution>) {
        if !self.feasible(k, vals) {
            return;
        }
        if k == self.free.len() {
            let mut assignment = BTreeMap::new();
            for (p, &pc) in self.pivots.iter().enumerate() {
                let mut x = self.beta[p].clone();
                for (f, a) in self.alpha[p].iter().enumerate() {
                    x -= a * rat(vals[f]);
                }
                if !x.is_integer() {
                    return;
                }
                let x = x.to_integer();
                assignment.insert(self.vars[pc], x);
            }
            for (f, &fc) in self.free.iter().enumerate() {
                assignment.insert(self.vars[fc], BigInt::from(vals[f]));
            }
            assignment.retain(|_, x| !x.is_zero());
            out.push(SpectrumSolution { assignment });
            return;
        }
        let (l, h) = self.ranges[k];
        for x in l..=h {
            vals[k] = x;
            self.search(k + 1, vals, out);
        }
        vals[k] = 0;
    }
}

/// An affine expression `constant + sum coeff_j * a_j` in the free variables.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineForm {
    pub var: u64,
    pub constant: BigRational,
    pub coeffs: Vec<(u64, BigRational)>,
}

impl AffineForm {
    pub fn eval(&self, free: &BTreeMap<u64, BigRational>) -> BigRational {
        let mut x = self.constant.clone();
        for (v, c) in &self.coeffs {
            x += c * free.get(v).cloned().unwrap_or_else(BigRational::zero);
        }
        x
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{} = {}", self.var, self.constant)?;
        for (v, c) in &self.coeffs {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { '-' } else { '+' };
            let abs = c.abs();
            if abs.is_one() {
                write!(f, " {sign} a{v}")?;
            } else {
                write!(f, " {sign} {abs}*a{v}")?;
            }
        }
        Ok(())
    }
}

/// Expresses every non-free variable as an affine form in `free`.
pub fn parametric_solve(sys: &ExactSystem, free: &[u64]) -> Result<Vec<AffineForm>> {
    for v in free {
        if sys.position(*v).is_none() {
            return Err(Error::InvalidArgument(format!("a{v} is not a variable")));
        }
    }
    let bound: Vec<usize> = (0..sys.vars.len())
        .filter(|&j| !free.contains(&sys.vars[j]))
        .collect();
    let freecols: Vec<usize> = free.iter().map(|v| sys.position(*v).unwrap()).collect();
    // Columns ordered bound-first so the pivots land on bound variables.
    let order: Vec<usize> = bound.iter().chain(&freecols).copied().collect();
    let mut m: Vec<Vec<BigRational>> = sys
        .rows
        .iter()
        .zip(&sys.rhs)
        .map(|(r, x)| {
            let mut row: Vec<BigRational> = order.iter().map(|&j| r[j].clone()).collect();
            row.push(x.clone());
            row
        })
        .collect();
    let pivots = rref_aug(&mut m, order.len()).ok_or(Error::Infeasible)?;
    if pivots.len() < bound.len() || pivots[..bound.len()] != (0..bound.len()).collect::<Vec<_>>() {
        return Err(Error::Singular);
    }
    if pivots.len() > bound.len() {
        // The free variables themselves are constrained.
        return Err(Error::Singular);
    }
    let nb = bound.len();
    Ok((0..nb)
        .map(|p| AffineForm {
            var: sys.vars[bound[p]],
            constant: m[p][order.len()].clone(),
            coeffs: freecols
                .iter()
                .enumerate()
                .map(|(k, &fc)| (sys.vars[fc], -m[p][nb + k].clone()))
                .collect(),
        })
        .collect())
}
