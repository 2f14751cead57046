//! Second cohomology of a subgroup with ℤ/m coefficients, and its k×
//! quotient, by exact integer linear algebra.
//!
//! Unknowns are the cocycle values `c(g, h)` over nonidentity pairs, so a
//! subgroup of order `h` has `(h−1)²` unknowns. The cocycle condition over
//! nonidentity triples gives the degree-3 constraint matrix; its mod-m
//! solution lattice and the coboundary image are handled through Smith
//! normal form on matrices augmented with `m`·identity rows, which deals
//! with zero divisors of composite `m` uniformly.
//!
//! A ℤ/M class survives in `H²(H, k×)` iff it stays non-cobounding after
//! the coefficient embedding `ℤ/M → ℤ/(M·e)` (multiplication by the
//! exponent `e` of `H`): any k×-valued cochain cobounding an order-M class
//! can be chosen with values in the `(M·e)`-th roots of unity, so the
//! stabilized check is exact.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cocycle::{Cochain2, CocycleError};
use crate::group::GroupError;
use crate::linalg::{kernel_basis, smith_with, Mat, RowEchelon, SnfTracking};
use crate::subgroup::Subgroup;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("problem size {unknowns} unknowns exceeds cap {cap}")]
    CapExceeded { unknowns: usize, cap: usize },
    #[error("cochain is not a cocycle")]
    NotACocycle,
    #[error("cocycle lives on a different subgroup")]
    SubgroupMismatch,
    #[error("modulus mismatch: expected {expected}, got {got}")]
    ModulusMismatch { expected: i64, got: i64 },
    #[error("subgroup order {subgroup_order} does not divide modulus {modulus}")]
    BadModulus { subgroup_order: usize, modulus: i64 },
    #[error("coordinate tuple has length {got}, expected {expected}")]
    CoordsLength { expected: usize, got: usize },
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Size limits for the cohomology linear algebra.
#[derive(Debug, Clone, Copy)]
pub struct CohomologyCaps {
    /// Refuse subgroups with more than this many cocycle unknowns, i.e.
    /// `(|H|−1)² > unknowns_cap`.
    pub unknowns_cap: usize,
}

impl Default for CohomologyCaps {
    fn default() -> Self {
        CohomologyCaps {
            unknowns_cap: 40_000,
        }
    }
}

/// Retained linear-algebra transforms: enough to coordinate any cocycle
/// and to rebuild representatives.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoordinateData {
    /// Inverse of the column transform of the constraint-row SNF.
    vinv: Mat,
    /// Diagonal scaling: the solution lattice is `V·diag(t)`.
    t: Vec<i64>,
    /// Row transform of the quotient SNF.
    ux: Mat,
    /// Positions of invariant factors > 1 on the quotient diagonal.
    positions: Vec<usize>,
}

/// `H²(H, ℤ/m)` or its k× quotient: invariant factors `d₁ | d₂ | …`,
/// generator cocycles, and the transforms mapping any cocycle to its
/// coordinate tuple in `Π ℤ/dᵢ`.
#[derive(Clone)]
pub struct H2Group {
    subgroup: Subgroup,
    modulus: i64,
    invariant_factors: Vec<i64>,
    generators: Vec<Cochain2>,
    coord: CoordinateData,
}

/// Column index of the unknown `c(a, b)` for local indices `a, b ≥ 1`.
#[inline]
fn pair_col(h: usize, a: usize, b: usize) -> usize {
    (a - 1) * (h - 1) + (b - 1)
}

/// Multiplication table on local indices of a subgroup.
fn local_table(sub: &Subgroup) -> Vec<usize> {
    let h = sub.order();
    let g = sub.group();
    let mut table = vec![0usize; h * h];
    for a in 0..h {
        for b in 0..h {
            table[a * h + b] = sub
                .local_index(g.mul(sub.members()[a], sub.members()[b]))
                .expect("subgroup closed");
        }
    }
    table
}

/// Coboundary matrix d²: unknowns `f(g)` for nonidentity `g` (columns) to
/// pair values (rows): `(df)(a,b) = f(a) + f(b) − f(ab)`.
fn coboundary_matrix(sub: &Subgroup, table: &[usize]) -> Mat {
    let h = sub.order();
    let n = (h - 1) * (h - 1);
    let mut d2 = Mat::zeros(n, h - 1);
    for a in 1..h {
        for b in 1..h {
            let row = pair_col(h, a, b);
            d2.set(row, a - 1, d2.at(row, a - 1) + 1);
            d2.set(row, b - 1, d2.at(row, b - 1) + 1);
            let ab = table[a * h + b];
            if ab != 0 {
                d2.set(row, ab - 1, d2.at(row, ab - 1) - 1);
            }
        }
    }
    d2
}

/// The solution lattice `L = {x : d³x ≡ 0 mod m}` presented as
/// `B = V·diag(t)`.
struct CocycleLattice {
    v: Mat,
    vinv: Mat,
    t: Vec<i64>,
}

fn cocycle_lattice(sub: &Subgroup, table: &[usize], m: i64) -> CocycleLattice {
    let h = sub.order();
    let n = if h > 0 { (h - 1) * (h - 1) } else { 0 };
    // The echelon works mod m and its output matrix carries m·identity rows,
    // so the lattice below is exactly {x : d³x ≡ 0 mod m} with the vacuous
    // relations m·xᵢ ≡ 0 included (full rank, zero-divisor safe).
    let mut ech = RowEchelon::new(n, m);
    let mut seen: std::collections::HashSet<Vec<(usize, i64)>> = std::collections::HashSet::new();
    let mut sparse: Vec<(usize, i64)> = Vec::with_capacity(4);
    for a in 1..h {
        for b in 1..h {
            let ab = table[a * h + b];
            for c in 1..h {
                let bc = table[b * h + c];
                sparse.clear();
                sparse.push((pair_col(h, a, b), 1));
                if ab != 0 {
                    sparse.push((pair_col(h, ab, c), 1));
                }
                sparse.push((pair_col(h, b, c), -1));
                if bc != 0 {
                    sparse.push((pair_col(h, a, bc), -1));
                }
                sparse.sort_unstable();
                // Merge duplicate columns, drop cancellations and repeats.
                let mut merged: Vec<(usize, i64)> = Vec::with_capacity(4);
                for &(col, coeff) in &sparse {
                    match merged.last_mut() {
                        Some((c, v)) if *c == col => *v += coeff,
                        _ => merged.push((col, coeff)),
                    }
                }
                merged.retain(|&(_, v)| v != 0);
                if merged.is_empty() || !seen.insert(merged.clone()) {
                    continue;
                }
                let mut row = vec![0i64; n];
                for &(col, coeff) in &merged {
                    row[col] = coeff;
                }
                ech.add_row(row);
            }
        }
    }
    let r = ech.into_matrix();
    let snf = smith_with(&r, SnfTracking::COLS);
    let t = snf
        .diag
        .iter()
        .map(|&d| {
            debug_assert!(d > 0);
            m / gcd_i64(d, m)
        })
        .collect();
    CocycleLattice {
        v: snf.v.expect("tracked"),
        vinv: snf.vinv.expect("tracked"),
        t,
    }
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd_i64(b, a % b)
    }
}

/// Quotient of the solution lattice by the column span of `denom`
/// (expected to contain `m·ℤⁿ`); returns the H² data.
fn quotient(
    sub: &Subgroup,
    m: i64,
    lat: &CocycleLattice,
    denom: &Mat,
) -> (Vec<i64>, Vec<Cochain2>, CoordinateData) {
    let n = lat.t.len();
    // X = B⁻¹·denom = diag(1/t)·(V⁻¹·denom); integrality certifies the
    // denominator lattice sits inside the solution lattice.
    let vs = lat.vinv.mul_mat(denom);
    let mut x = Mat::zeros(n, denom.cols());
    for i in 0..n {
        for j in 0..denom.cols() {
            let num = vs.at(i, j);
            assert_eq!(num % lat.t[i], 0, "denominator escapes the cocycle lattice");
            x.set(i, j, num / lat.t[i]);
        }
    }
    let snf = smith_with(&x, SnfTracking::ROWS);
    assert_eq!(
        snf.rank(),
        n,
        "cohomology quotient is not finite (missing modulus relations)"
    );
    let positions: Vec<usize> = (0..n).filter(|&i| snf.diag[i] > 1).collect();
    let factors: Vec<i64> = positions.iter().map(|&i| snf.diag[i]).collect();
    // Generator vectors are columns of B·Uₓ⁻¹ at the retained positions.
    let mut scaled = snf.uinv().clone();
    for i in 0..n {
        for j in 0..n {
            scaled.set(
                i,
                j,
                scaled
                    .at(i, j)
                    .checked_mul(lat.t[i])
                    .expect("integer overflow"),
            );
        }
    }
    let gen_mat = lat.v.mul_mat(&scaled);
    let generators: Vec<Cochain2> = positions
        .iter()
        .map(|&p| Cochain2::from_pair_vector(sub.clone(), m, &gen_mat.col(p)))
        .collect();
    let coord = CoordinateData {
        vinv: lat.vinv.clone(),
        t: lat.t.clone(),
        ux: snf.u.expect("tracked"),
        positions,
    };
    (factors, generators, coord)
}

fn check_caps(sub: &Subgroup, caps: &CohomologyCaps) -> Result<usize, CohomologyError> {
    let h = sub.order();
    let n = (h - 1) * (h - 1);
    if n > caps.unknowns_cap {
        return Err(CohomologyError::CapExceeded {
            unknowns: n,
            cap: caps.unknowns_cap,
        });
    }
    Ok(n)
}

/// `H²(H, ℤ/m)` from the normalized bar resolution: cocycle lattice modulo
/// coboundaries and `m`-multiples.
pub fn h2_mod_m(
    sub: &Subgroup,
    m: i64,
    caps: &CohomologyCaps,
) -> Result<H2Group, CohomologyError> {
    let n = check_caps(sub, caps)?;
    let table = local_table(sub);
    let lat = cocycle_lattice(sub, &table, m);
    let d2 = coboundary_matrix(sub, &table);
    let mut m_id = Mat::zeros(n, n);
    for i in 0..n {
        m_id.set(i, i, m);
    }
    let denom = d2.hcat(&m_id);
    let (invariant_factors, generators, coord) = quotient(sub, m, &lat, &denom);
    Ok(H2Group {
        subgroup: sub.clone(),
        modulus: m,
        invariant_factors,
        generators,
        coord,
    })
}

/// `H²(H, k×)` at working modulus `M` (which `|H|` must divide): the mod-M
/// cohomology modulo every class that cobounds after the coefficient
/// embedding into ℤ/(M·e), `e` the exponent of `H`.
pub fn h2_units(
    sub: &Subgroup,
    big_m: i64,
    caps: &CohomologyCaps,
) -> Result<H2Group, CohomologyError> {
    let n = check_caps(sub, caps)?;
    if big_m <= 0 || big_m % (sub.order() as i64) != 0 {
        return Err(CohomologyError::BadModulus {
            subgroup_order: sub.order(),
            modulus: big_m,
        });
    }
    let table = local_table(sub);
    let lat = cocycle_lattice(sub, &table, big_m);
    let d2 = coboundary_matrix(sub, &table);
    let e = sub.exponent() as i64;
    let me = big_m.checked_mul(e).expect("integer overflow in modulus");
    // x is killed in k× iff e·x lies in the span of [d² | M·e·I]; the set of
    // such x is the projection to the x-block of the kernel of
    // [e·I | −d² | −M·e·I].
    let mut a_t = Mat::zeros(n, n + (d2.cols()) + n);
    for i in 0..n {
        a_t.set(i, i, e);
    }
    for i in 0..n {
        for j in 0..d2.cols() {
            a_t.set(i, n + j, -d2.at(i, j));
        }
    }
    for i in 0..n {
        a_t.set(i, n + d2.cols() + i, -me);
    }
    let kernel = kernel_basis(&a_t);
    let killed = Mat::from_cols(
        kernel.iter().map(|k| k[..n].to_vec()).collect(),
        n,
    );
    let (invariant_factors, generators, coord) = quotient(sub, big_m, &lat, &killed);
    Ok(H2Group {
        subgroup: sub.clone(),
        modulus: big_m,
        invariant_factors,
        generators,
        coord,
    })
}

impl H2Group {
    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    /// Invariant factors `d₁ | d₂ | …`, all > 1; empty for the trivial group.
    pub fn invariant_factors(&self) -> &[i64] {
        &self.invariant_factors
    }

    pub fn generators(&self) -> &[Cochain2] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Group order `Π dᵢ`.
    pub fn order(&self) -> i64 {
        self.invariant_factors.iter().product()
    }

    /// Coordinates of a cocycle's class in `Π ℤ/dᵢ`. Two cocycles receive
    /// equal coordinates iff they are cohomologous in the coefficient group
    /// this `H2Group` was built for.
    pub fn class_coordinates(&self, c: &Cochain2) -> Result<Vec<i64>, CohomologyError> {
        if c.subgroup() != &self.subgroup {
            return Err(CohomologyError::SubgroupMismatch);
        }
        if c.modulus() != self.modulus {
            return Err(CohomologyError::ModulusMismatch {
                expected: self.modulus,
                got: c.modulus(),
            });
        }
        if !c.is_cocycle() {
            return Err(CohomologyError::NotACocycle);
        }
        let x = c.pair_vector();
        let y = self.coord.vinv.mul_vec(&x);
        let mut w = vec![0i64; y.len()];
        for i in 0..y.len() {
            if y[i] % self.coord.t[i] != 0 {
                return Err(CohomologyError::NotACocycle);
            }
            w[i] = y[i] / self.coord.t[i];
        }
        let full = self.coord.ux.mul_vec(&w);
        Ok(self
            .coord
            .positions
            .iter()
            .zip(&self.invariant_factors)
            .map(|(&p, &d)| full[p].rem_euclid(d))
            .collect())
    }

    /// Whether the class of `c` is trivial in this cohomology group.
    pub fn is_trivial_class(&self, c: &Cochain2) -> Result<bool, CohomologyError> {
        Ok(self.class_coordinates(c)?.iter().all(|&v| v == 0))
    }

    /// A representative cocycle with the given coordinates:
    /// `Σ coordsᵢ · generatorᵢ`.
    pub fn representative(&self, coords: &[i64]) -> Result<Cochain2, CohomologyError> {
        if coords.len() != self.rank() {
            return Err(CohomologyError::CoordsLength {
                expected: self.rank(),
                got: coords.len(),
            });
        }
        let mut acc = Cochain2::zero(self.subgroup.clone(), self.modulus);
        for (c, gen) in coords.iter().zip(&self.generators) {
            acc = acc.add(&gen.scale(*c))?;
        }
        Ok(acc)
    }

    /// Reduces a coordinate tuple componentwise mod the invariant factors.
    pub fn reduce_coords(&self, coords: &[i64]) -> Result<Vec<i64>, CohomologyError> {
        if coords.len() != self.rank() {
            return Err(CohomologyError::CoordsLength {
                expected: self.rank(),
                got: coords.len(),
            });
        }
        Ok(coords
            .iter()
            .zip(&self.invariant_factors)
            .map(|(&c, &d)| c.rem_euclid(d))
            .collect())
    }

    /// All coordinate tuples, lexicographically ordered; the size is
    /// `Π dᵢ`.
    pub fn all_coordinate_tuples(&self) -> Vec<Vec<i64>> {
        let mut tuples = vec![Vec::new()];
        for &d in &self.invariant_factors {
            let mut next = Vec::with_capacity(tuples.len() * d as usize);
            for t in &tuples {
                for v in 0..d {
                    let mut t2 = t.clone();
                    t2.push(v);
                    next.push(t2);
                }
            }
            tuples = next;
        }
        tuples
    }
}

impl std::fmt::Debug for H2Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "H2Group(|H|={}, m={}, factors={:?})",
            self.subgroup.order(),
            self.modulus,
            self.invariant_factors
        )
    }
}

/// Serializable form of an [`H2Group`] (the subgroup and modulus live in the
/// cache key, not the record).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct H2Record {
    pub invariant_factors: Vec<i64>,
    pub generators: Vec<Vec<i64>>,
    pub vinv: Vec<Vec<i64>>,
    pub t: Vec<i64>,
    pub ux: Vec<Vec<i64>>,
    pub positions: Vec<usize>,
}

impl H2Group {
    pub fn to_record(&self) -> H2Record {
        H2Record {
            invariant_factors: self.invariant_factors.clone(),
            generators: self
                .generators
                .iter()
                .map(|g| g.values_row_major().to_vec())
                .collect(),
            vinv: self.coord.vinv.row_vecs(),
            t: self.coord.t.clone(),
            ux: self.coord.ux.row_vecs(),
            positions: self.coord.positions.clone(),
        }
    }

    /// Rebuilds from a cached record, validating shapes and re-checking the
    /// generator/coordinate contract: generators must be normalized cocycles
    /// coordinating to unit tuples, coboundaries and `m`-multiples must
    /// coordinate to zero. Any violation yields `None` so a damaged cache is
    /// bypassed rather than trusted.
    pub fn from_record(subgroup: Subgroup, modulus: i64, record: &H2Record) -> Option<H2Group> {
        let h = subgroup.order();
        let n = (h - 1) * (h - 1);
        let square = |rows: &Vec<Vec<i64>>| -> Option<Mat> {
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return None;
            }
            Some(Mat::from_rows(rows.clone(), n))
        };
        let vinv = square(&record.vinv)?;
        let ux = square(&record.ux)?;
        if record.t.len() != n || record.t.iter().any(|&t| t <= 0) {
            return None;
        }
        if record.positions.len() != record.invariant_factors.len()
            || record.positions.iter().any(|&p| p >= n)
            || record.invariant_factors.iter().any(|&d| d <= 1)
            || record.generators.len() != record.invariant_factors.len()
        {
            return None;
        }
        let mut generators = Vec::with_capacity(record.generators.len());
        for values in &record.generators {
            if values.len() != h * h {
                return None;
            }
            let c = Cochain2::from_values(subgroup.clone(), modulus, values.clone()).ok()?;
            if !c.is_cocycle() {
                return None;
            }
            generators.push(c);
        }
        let h2 = H2Group {
            subgroup,
            modulus,
            invariant_factors: record.invariant_factors.clone(),
            generators,
            coord: CoordinateData {
                vinv,
                t: record.t.clone(),
                ux,
                positions: record.positions.clone(),
            },
        };
        // Each stored generator must coordinate to its unit tuple.
        for (i, gen) in h2.generators.iter().enumerate() {
            let coords = h2.class_coordinates(gen).ok()?;
            let expected: Vec<i64> = (0..h2.rank()).map(|j| i64::from(j == i)).collect();
            if coords != expected {
                return None;
            }
        }
        // Coboundaries must coordinate to zero under the claimed factors;
        // the unit 1-cochains span them all.
        for i in 1..h {
            let mut values = vec![0i64; h];
            values[i] = 1;
            let f = crate::cocycle::Cochain1::from_values(h2.subgroup.clone(), modulus, values)
                .ok()?;
            let coords = h2.class_coordinates(&f.coboundary()).ok()?;
            if coords.iter().any(|&c| c != 0) {
                return None;
            }
        }
        // m·ℤⁿ sits in every denominator lattice, so the raw vectors m·eᵢ
        // must coordinate to zero as well.
        for i in 0..n {
            let y = h2.coord.vinv.col(i);
            let mut w = Vec::with_capacity(n);
            for (&yv, &t) in y.iter().zip(&h2.coord.t) {
                let num = modulus.checked_mul(yv)?;
                if num % t != 0 {
                    return None;
                }
                w.push(num / t);
            }
            let full = h2.coord.ux.mul_vec(&w);
            for (&p, &d) in h2.coord.positions.iter().zip(&h2.invariant_factors) {
                if full[p].rem_euclid(d) != 0 {
                    return None;
                }
            }
        }
        Some(h2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::Cochain1;
    use crate::group::named_group;
    use crate::subgroup::SubgroupClassTable;
    use std::sync::Arc;

    fn caps() -> CohomologyCaps {
        CohomologyCaps::default()
    }

    #[test]
    fn h2_of_trivial_subgroup_is_trivial() {
        let g = named_group("S3", 100).unwrap();
        let triv = Subgroup::trivial(Arc::clone(&g));
        let h2 = h2_mod_m(&triv, 6, &caps()).unwrap();
        assert!(h2.invariant_factors().is_empty());
        let h2u = h2_units(&triv, 6, &caps()).unwrap();
        assert!(h2u.invariant_factors().is_empty());
    }

    #[test]
    fn h2_of_c2_mod_2_is_z2_with_unit_generator() {
        let g = named_group("C2", 10).unwrap();
        let whole = Subgroup::whole(Arc::clone(&g));
        let h2 = h2_mod_m(&whole, 2, &caps()).unwrap();
        assert_eq!(h2.invariant_factors(), &[2]);
        let gen = &h2.generators()[0];
        assert_eq!(gen.value(1, 1), 1);
        assert_eq!(h2.class_coordinates(gen).unwrap(), vec![1]);
    }

    #[test]
    fn h2_of_c2_mod_4_is_z2() {
        let g = named_group("C4", 10).unwrap();
        let table = SubgroupClassTable::build(&g);
        let c2 = table.class(1).representative.clone();
        assert_eq!(c2.order(), 2);
        let h2 = h2_mod_m(&c2, 4, &caps()).unwrap();
        assert_eq!(h2.invariant_factors(), &[2]);
    }

    #[test]
    fn units_h2_of_c2_is_trivial() {
        // The mod-2 class c(x,x)=1 dies: 2·f(x) ≡ 2 (mod 4) is solvable.
        let g = named_group("C4", 10).unwrap();
        let table = SubgroupClassTable::build(&g);
        let c2 = table.class(1).representative.clone();
        let h2 = h2_units(&c2, 4, &caps()).unwrap();
        assert!(h2.invariant_factors().is_empty());
    }

    #[test]
    fn units_h2_of_cyclic_groups_is_trivial() {
        for spec in ["C2", "C3", "C4", "C6"] {
            let g = named_group(spec, 100).unwrap();
            let whole = Subgroup::whole(Arc::clone(&g));
            let h2 = h2_units(&whole, g.order() as i64, &caps()).unwrap();
            assert!(
                h2.invariant_factors().is_empty(),
                "H2({spec}, kx) should be trivial"
            );
        }
    }

    #[test]
    fn units_h2_of_c2xc2_is_z2() {
        let g = named_group("C2xC2", 10).unwrap();
        let whole = Subgroup::whole(Arc::clone(&g));
        let h2 = h2_units(&whole, 4, &caps()).unwrap();
        assert_eq!(h2.invariant_factors(), &[2]);
        // The generator sees the commutator pairing: some pair of distinct
        // involutions must anticommute under the cocycle.
        let gen = &h2.generators()[0];
        assert!(gen.is_cocycle());
        let asym = (1..4).any(|a| {
            (1..4).any(|b| {
                let x = whole.members()[a];
                let y = whole.members()[b];
                (gen.value(x, y) - gen.value(y, x)).rem_euclid(4) != 0
            })
        });
        assert!(asym, "generator of H2(C2xC2) must be non-symmetric");
    }

    #[test]
    fn coordinates_vanish_on_coboundaries() {
        let g = named_group("C2xC2", 10).unwrap();
        let whole = Subgroup::whole(Arc::clone(&g));
        let h2 = h2_units(&whole, 4, &caps()).unwrap();
        for vals in [[0, 1, 2, 3], [0, 3, 3, 1], [0, 2, 0, 2]] {
            let f = Cochain1::from_values(whole.clone(), 4, vals.to_vec()).unwrap();
            let coords = h2.class_coordinates(&f.coboundary()).unwrap();
            assert_eq!(coords, vec![0]);
        }
    }

    #[test]
    fn representative_round_trips() {
        let g = named_group("C2xC2", 10).unwrap();
        let whole = Subgroup::whole(Arc::clone(&g));
        let h2 = h2_units(&whole, 4, &caps()).unwrap();
        for tuple in h2.all_coordinate_tuples() {
            let rep = h2.representative(&tuple).unwrap();
            assert_eq!(h2.class_coordinates(&rep).unwrap(), tuple);
        }
    }

    #[test]
    fn mod_m_h2_of_q8_is_ext_part_only() {
        // H²(Q8, ℤ/8) = Ext(C2×C2, ℤ/8) = (ℤ/2)², all killed in k×.
        let g = named_group("Q8", 100).unwrap();
        let whole = Subgroup::whole(Arc::clone(&g));
        let h2m = h2_mod_m(&whole, 8, &caps()).unwrap();
        assert_eq!(h2m.invariant_factors(), &[2, 2]);
        let h2u = h2_units(&whole, 8, &caps()).unwrap();
        assert!(h2u.invariant_factors().is_empty());
    }

    #[test]
    fn units_h2_of_d4_is_z2() {
        let g = named_group("D4", 100).unwrap();
        let whole = Subgroup::whole(Arc::clone(&g));
        let h2 = h2_units(&whole, 8, &caps()).unwrap();
        assert_eq!(h2.invariant_factors(), &[2]);
    }

    #[test]
    fn record_round_trip_is_bit_identical() {
        let g = named_group("D4", 100).unwrap();
        let whole = Subgroup::whole(Arc::clone(&g));
        let h2 = h2_units(&whole, 8, &caps()).unwrap();
        let record = h2.to_record();
        let back = H2Group::from_record(whole, 8, &record).expect("valid record");
        assert_eq!(back.invariant_factors(), h2.invariant_factors());
        assert_eq!(back.generators(), h2.generators());
        assert_eq!(back.coord, h2.coord);
        assert_eq!(back.to_record(), record);
    }

    #[test]
    fn tampered_records_are_rejected() {
        let g = named_group("C2xC2", 100).unwrap();
        let whole = Subgroup::whole(Arc::clone(&g));
        let h2 = h2_units(&whole, 4, &caps()).unwrap();
        // Claimed factor not dividing the modulus.
        let mut record = h2.to_record();
        record.invariant_factors = vec![3];
        assert!(H2Group::from_record(whole.clone(), 4, &record).is_none());
        // Damaged generator values break the cocycle condition.
        let mut record = h2.to_record();
        record.generators[0][5] += 1;
        assert!(H2Group::from_record(whole.clone(), 4, &record).is_none());
        // Wrong shapes.
        let mut record = h2.to_record();
        record.t.pop();
        assert!(H2Group::from_record(whole.clone(), 4, &record).is_none());
        let mut record = h2.to_record();
        record.positions = vec![99];
        assert!(H2Group::from_record(whole, 4, &record).is_none());
    }

    #[test]
    fn cap_is_enforced() {
        let g = named_group("S3", 100).unwrap();
        let whole = Subgroup::whole(Arc::clone(&g));
        let tight = CohomologyCaps { unknowns_cap: 4 };
        assert!(matches!(
            h2_units(&whole, 6, &tight),
            Err(CohomologyError::CapExceeded { .. })
        ));
    }

    #[test]
    fn modulus_must_be_multiple_of_subgroup_order() {
        let g = named_group("S3", 100).unwrap();
        let whole = Subgroup::whole(Arc::clone(&g));
        assert!(matches!(
            h2_units(&whole, 4, &caps()),
            Err(CohomologyError::BadModulus { .. })
        ));
    }
}
