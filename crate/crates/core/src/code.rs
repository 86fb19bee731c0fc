//! Linear codes attached to point multisets.

use std::collections::BTreeMap;
use std::fmt;

use crate::analysis::PointMultiset;
use crate::error::{Error, Result};
use crate::geom::{rank, rref, Space};
use crate::gf::{Elem, Field};

/// Largest `q^k` swept by [`weight_distribution`].
pub const WEIGHT_BUDGET: u64 = 1 << 24;

#[derive(Clone, PartialEq, Eq)]
pub struct GeneratorMatrix {
    field: Field,
    rows: Vec<Vec<Elem>>,
    n: usize,
}

impl fmt::Debug for GeneratorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}, {}]_{}", self.n, self.k(), self.field.q())?;
        for r in &self.rows {
            let s: String = r.iter().map(|&e| char::from(b'0' + e)).collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

impl GeneratorMatrix {
    /// Builds a matrix from rows of element codes. All rows must have the
    /// same length. Rank is not checked; see [`GeneratorMatrix::rank`].
    pub fn new(field: &Field, rows: Vec<Vec<Elem>>) -> Result<GeneratorMatrix> {
        let n = rows.first().map_or(0, Vec::len);
        for r in &rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: r.len(),
                });
            }
            for &e in r {
                field.check(e as u32)?;
            }
        }
        Ok(GeneratorMatrix {
            field: field.clone(),
            rows,
            n,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    pub fn rank(&self) -> usize {
        rank(&self.field, &self.rows)
    }

    /// The codeword `msg * G`.
    pub fn encode(&self, msg: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let mut c = vec![0u8; self.n];
        for (r, &a) in self.rows.iter().zip(msg) {
            if a == 0 {
                continue;
            }
            for (cj, &g) in c.iter_mut().zip(r) {
                *cj = f.add(*cj, f.mul(a, g));
            }
        }
        c
    }

    /// Whether `c` lies in the row space.
    pub fn contains(&self, c: &[Elem]) -> bool {
        if c.len() != self.n {
            return false;
        }
        let mut ext = self.rows.clone();
        ext.push(c.to_vec());
        rank(&self.field, &ext) == self.rank()
    }
}

/// Weight census `w -> A_w`.
#[derive(Debug, Clone, PartialEq, Eq, Default, serde::Serialize)]
pub struct WeightDistribution {
    pub counts: BTreeMap<usize, u128>,
}

impl WeightDistribution {
    pub fn get(&self, w: usize) -> u128 {
        self.counts.get(&w).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u128 {
        self.counts.values().sum()
    }

    pub fn from_pairs(pairs: &[(usize, u128)]) -> WeightDistribution {
        WeightDistribution {
            counts: pairs.iter().copied().filter(|&(_, c)| c > 0).collect(),
        }
    }
}

impl fmt::Display for WeightDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.counts.iter().map(|(w, c)| format!("{c}z^{w}")).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// `C(M)` with a flag telling whether `M` spans its ambient space.
#[derive(Debug, Clone)]
pub struct PointCode {
    pub matrix: GeneratorMatrix,
    pub spanning: bool,
}

/// Generator matrix whose columns are the points of `m` in ascending id
/// order, repeated per multiplicity. A non-spanning multiset gives the
/// reduced row basis of dimension `dim(span)`.
pub fn code_from_points(m: &PointMultiset) -> Result<PointCode> {
    if m.is_empty() {
        return Err(Error::EmptyMultiset);
    }
    let s = m.space();
    let cols: Vec<&[Elem]> = m.to_id_list().into_iter().map(|p| s.point(p)).collect();
    let mut rows: Vec<Vec<Elem>> = (0..m.v()).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    let spanning = rank(m.field(), &rows) == m.v();
    if !spanning {
        rref(m.field(), &mut rows);
    }
    Ok(PointCode {
        matrix: GeneratorMatrix::new(m.field(), rows)?,
        spanning,
    })
}

/// Point multiset of the columns, in PG(k-1, q). Zero columns are dropped and
/// counted.
pub fn points_from_code(g: &GeneratorMatrix) -> Result<(PointMultiset, usize)> {
    let s = Space::new(&g.field, g.k())?;
    let mut m = PointMultiset::new(&s);
    let mut zeros = 0;
    for j in 0..g.n {
        let c = g.column(j);
        match s.id_of(&c) {
            Ok(id) => m.add(id, 1),
            Err(Error::ZeroVector) => zeros += 1,
            Err(e) => return Err(e),
        }
    }
    Ok((m, zeros))
}

/// Exact weight distribution by sweeping all `q^k` messages.
pub fn weight_distribution(g: &GeneratorMatrix) -> Result<WeightDistribution> {
    let f = &g.field;
    let q = f.q() as u64;
    let k = g.k();
    if !q.checked_pow(k as u32).is_some_and(|s| s <= WEIGHT_BUDGET) {
        return Err(Error::Guard(format!("q^k = {q}^{k} exceeds the weight budget {WEIGHT_BUDGET}")));
    }
    let mut hist = vec![0u128; g.n + 1];
    let mut msg = vec![0u8; k];
    let mut cw = vec![0u8; g.n];
    let mut weight = 0usize;
    hist[0] = 1;
    'outer: loop {
        // Odometer step on the message, updating the codeword in place.
        let mut i = k;
        loop {
            if i == 0 {
                break 'outer;
            }
            i -= 1;
            let old = msg[i];
            let new = if (old as usize) + 1 == f.q() { 0 } else { old + 1 };
            msg[i] = new;
            let delta = f.sub(new, old);
            for (j, c) in cw.iter_mut().enumerate() {
                let before = *c;
                *c = f.add(*c, f.mul(delta, g.rows[i][j]));
                match (before == 0, *c == 0) {
                    (true, false) => weight += 1,
                    (false, true) => weight -= 1,
                    _ => {}
                }
            }
            if new != 0 {
                break;
            }
        }
        hist[weight] += 1;
    }
    Ok(WeightDistribution {
        counts: hist
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .collect(),
    })
}

/// Columns nonzero and pairwise non-proportional.
pub fn is_projective(g: &GeneratorMatrix) -> bool {
    let Ok(s) = Space::new(&g.field, g.k()) else {
        return false;
    };
    let mut seen = std::collections::HashSet::new();
    (0..g.n).all(|j| match s.id_of_vec(&g.column(j)) {
        Some(id) => seen.insert(id),
        None => false,
    })
}

/// Reads the same array over the prime field.
pub fn reinterpret_prime_subfield(g: &GeneratorMatrix) -> Result<GeneratorMatrix> {
    let p = g.field.p();
    for r in &g.rows {
        if let Some(&e) = r.iter().find(|&&e| e as u32 >= p) {
            return Err(Error::NotInPrimeSubfield { code: e, p });
        }
    }
    GeneratorMatrix::new(&Field::prime(p)?, g.rows.clone())
}

/// Restriction of the code to the zero coordinates of the codeword `c`,
/// returned as a reduced basis.
pub fn residual_code(g: &GeneratorMatrix, c: &[Elem]) -> Result<GeneratorMatrix> {
    if c.iter().all(|&x| x == 0) {
        return Err(Error::BadCodeword("zero codeword".into()));
    }
    if !g.contains(c) {
        return Err(Error::BadCodeword("not in the code".into()));
    }
    let zeros: Vec<usize> = (0..g.n).filter(|&j| c[j] == 0).collect();
    let mut rows: Vec<Vec<Elem>> = g.rows.iter().map(|r| zeros.iter().map(|&j| r[j]).collect()).collect();
    rref(&g.field, &mut rows);
    let mut out = GeneratorMatrix::new(&g.field, rows)?;
    out.n = zeros.len();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{hyperplane_multiplicities, is_divisible};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn parse_rows(rows: &[&str]) -> Vec<Vec<Elem>> {
        rows.iter().map(|r| r.bytes().map(|b| b - b'0').collect()).collect()
    }

    fn ce_16_5() -> GeneratorMatrix {
        GeneratorMatrix::new(
            &Field::with_order(4).unwrap(),
            parse_rows(&[
                "0110101101110000",
                "1101100011101000",
                "1100011111000100",
                "1111111000000010",
                "0111010110100001",
            ]),
        )
        .unwrap()
    }

    fn code_10_3() -> GeneratorMatrix {
        GeneratorMatrix::new(
            &Field::prime(5).unwrap(),
            parse_rows(&["1111110100", "4432101010", "3442014001"]),
        )
        .unwrap()
    }

    fn simplex(q: u64, k: usize) -> GeneratorMatrix {
        let s = Space::new(&Field::with_order(q).unwrap(), k).unwrap();
        code_from_points(&PointMultiset::from_points(&s, s.points())).unwrap().matrix
    }

    /// Weight census by direct encoding of every message.
    fn brute_weights(g: &GeneratorMatrix) -> WeightDistribution {
        let mut d = WeightDistribution::default();
        crate::geom::for_each_vector(g.field().q(), g.k(), |msg| {
            let w = g.encode(msg).iter().filter(|&&x| x != 0).count();
            *d.counts.entry(w).or_default() += 1;
        });
        d
    }

    #[test]
    fn fixture_weight_enumerators() {
        let g = ce_16_5();
        assert_eq!(
            weight_distribution(&g).unwrap(),
            WeightDistribution::from_pairs(&[(0, 1), (8, 90), (12, 840), (16, 93)])
        );
        assert!(is_projective(&g));
        let g2 = reinterpret_prime_subfield(&g).unwrap();
        assert_eq!(
            weight_distribution(&g2).unwrap(),
            WeightDistribution::from_pairs(&[(0, 1), (8, 30), (16, 1)])
        );
        let c = code_10_3();
        assert_eq!(
            weight_distribution(&c).unwrap(),
            WeightDistribution::from_pairs(&[(0, 1), (7, 40), (8, 60), (10, 24)])
        );
        assert!(is_projective(&c));
        assert_eq!(
            weight_distribution(&c).unwrap().to_string(),
            "1z^0 + 40z^7 + 60z^8 + 24z^10"
        );
    }

    #[test]
    fn simplex_codes() {
        assert_eq!(
            weight_distribution(&simplex(2, 3)).unwrap(),
            WeightDistribution::from_pairs(&[(0, 1), (4, 7)])
        );
        let g = simplex(3, 3);
        assert!(is_projective(&g));
        assert_eq!(weight_distribution(&g).unwrap(), brute_weights(&g));
    }

    #[test]
    fn sweep_matches_direct_encoding() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let f = Field::with_order(q).unwrap();
            for _ in 0..4 {
                let k = rng.gen_range(1..4);
                let n = rng.gen_range(1..9);
                let rows = (0..k)
                    .map(|_| (0..n).map(|_| rng.gen_range(0..q) as u8).collect())
                    .collect();
                let g = GeneratorMatrix::new(&f, rows).unwrap();
                let w = weight_distribution(&g).unwrap();
                assert_eq!(w, brute_weights(&g));
                assert_eq!(w.total(), (q as u128).pow(k as u32));
            }
        }
    }

    #[test]
    fn weights_match_hyperplanes() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for q in [2u64, 3, 4, 5] {
            let s = Space::new(&Field::with_order(q).unwrap(), 3).unwrap();
            for _ in 0..5 {
                let mut m = PointMultiset::new(&s);
                for _ in 0..8 {
                    m.add(rng.gen_range(0..s.num_points()), 1);
                }
                let pc = code_from_points(&m).unwrap();
                if !pc.spanning {
                    continue;
                }
                let w = weight_distribution(&pc.matrix).unwrap();
                let n = m.n() as usize;
                let mut expect = BTreeMap::new();
                expect.insert(0usize, 1u128);
                for h in hyperplane_multiplicities(&m) {
                    *expect.entry(n - h as usize).or_default() += q as u128 - 1;
                }
                assert_eq!(w.counts, expect);
                let sum: u128 = w.counts.iter().map(|(&w, &c)| w as u128 * c).sum();
                assert_eq!(sum, (q as u128 - 1) * (q as u128).pow(2) * n as u128);
                for delta in 2..5u64 {
                    let all = w.counts.keys().all(|&x| (x as u64).is_multiple_of(delta));
                    assert_eq!(is_divisible(&m, delta).unwrap().divisible, all);
                }
            }
        }
    }

    #[test]
    fn points_round_trip() {
        let g = code_10_3();
        let (m, zeros) = points_from_code(&g).unwrap();
        assert_eq!((m.n(), zeros, m.is_set(), m.v()), (10, 0, true, 3));
        let back = code_from_points(&m).unwrap();
        assert!(back.spanning);
        assert_eq!(points_from_code(&back.matrix).unwrap().0, m);

        let f = Field::prime(2).unwrap();
        let id = GeneratorMatrix::new(&f, parse_rows(&["100", "010", "001"])).unwrap();
        let (m, _) = points_from_code(&id).unwrap();
        let units: Vec<usize> = (0..3).map(|i| m.space().id_of(&m.space().unit(i)).unwrap()).collect();
        assert_eq!(m.support(), units);
        let dup = GeneratorMatrix::new(&f, parse_rows(&["1100", "0010"])).unwrap();
        let (m, zeros) = points_from_code(&dup).unwrap();
        assert_eq!((m.max_mult(), zeros), (2, 1));
        assert!(!is_projective(&dup));

        let s = Space::new(&f, 4).unwrap();
        let flat = PointMultiset::from_points(&s, [0, 1]);
        let pc = code_from_points(&flat).unwrap();
        assert!(!pc.spanning);
        assert_eq!(pc.matrix.k(), 2);
        assert!(matches!(code_from_points(&PointMultiset::new(&s)), Err(Error::EmptyMultiset)));
    }

    #[test]
    fn prime_subfield_errors() {
        let f = Field::with_order(4).unwrap();
        let g = GeneratorMatrix::new(&f, parse_rows(&["12"])).unwrap();
        assert!(matches!(
            reinterpret_prime_subfield(&g),
            Err(Error::NotInPrimeSubfield { code: 2, p: 2 })
        ));
        assert!(GeneratorMatrix::new(&f, parse_rows(&["14"])).is_err());
        assert!(GeneratorMatrix::new(&f, parse_rows(&["1", "01"])).is_err());
    }

    #[test]
    fn residuals() {
        let g = simplex(2, 3);
        for msg in [[1u8, 0, 0], [0, 1, 1], [1, 1, 1]] {
            let c = g.encode(&msg);
            let r = residual_code(&g, &c).unwrap();
            assert_eq!((r.n(), r.k()), (3, 2));
            assert_eq!(
                weight_distribution(&r).unwrap(),
                WeightDistribution::from_pairs(&[(0, 1), (2, 3)])
            );
        }
        assert!(matches!(residual_code(&g, &[0; 7]), Err(Error::BadCodeword(_))));
        let f = Field::prime(2).unwrap();
        let small = GeneratorMatrix::new(&f, parse_rows(&["1100"])).unwrap();
        assert!(matches!(residual_code(&small, &[1, 0, 1, 0]), Err(Error::BadCodeword(_))));

        // AG(3,2) is 4-divisible; residuals of its words are 2-divisible.
        let s3 = Space::new(&f, 4).unwrap();
        let ag = PointMultiset::from_points(&s3, s3.points().filter(|&p| s3.point(p)[0] == 1));
        let g = code_from_points(&ag).unwrap().matrix;
        let mut checked = 0;
        crate::geom::for_each_vector(2, 4, |msg| {
            let c = g.encode(msg);
            if c.iter().all(|&x| x == 0) || c.iter().all(|&x| x != 0) {
                return;
            }
            let r = residual_code(&g, &c).unwrap();
            assert_eq!(r.n(), c.iter().filter(|&&x| x == 0).count());
            let w = weight_distribution(&r).unwrap();
            assert!(w.counts.keys().all(|&x| x % 2 == 0), "{w}");
            checked += 1;
        });
        assert_eq!(checked, 14);
    }

    #[test]
    fn budget_guard() {
        let f = Field::prime(2).unwrap();
        let g = GeneratorMatrix::new(&f, vec![vec![1]; 25]).unwrap();
        assert!(matches!(weight_distribution(&g), Err(Error::Guard(_))));
    }
}
