//! Directed cycles, passage matrices and orbit tracing.
//!
//! A cycle of period `p` is an equivalence class of periodic vertex
//! sequences under rotation; we store the canonical representative that
//! starts at the smallest vertex. Its passage matrix carries a 1 exactly
//! on the cycle's directed edges and acts on the canonical basis as the
//! shift `J e_{c(i)} = e_{c(i-1)}`, so the passage matrix of the full
//! cycle `(0,1,...,p-1)` is the left-shift operator.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Entries of a candidate permutation matrix must be within this distance
/// of 0 or 1.
const BINARY_TOL: f64 = 1e-12;

/// Ordered distinct vertices of a directed cycle, canonically rotated so
/// the smallest vertex comes first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Cycle {
    vertices: Vec<usize>,
}

impl Cycle {
    pub fn new(vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidCycle("a cycle needs at least one vertex".into()));
        }
        let mut seen = vec![];
        for &v in &vertices {
            if seen.contains(&v) {
                return Err(Error::InvalidCycle(format!("repeated vertex {v}")));
            }
            seen.push(v);
        }
        Ok(Self::canonicalize(vertices))
    }

    fn canonicalize(vertices: Vec<usize>) -> Self {
        let min_pos = vertices
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| v)
            .map(|(i, _)| i)
            .unwrap();
        let mut rotated = Vec::with_capacity(vertices.len());
        rotated.extend_from_slice(&vertices[min_pos..]);
        rotated.extend_from_slice(&vertices[..min_pos]);
        Self { vertices: rotated }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn period(&self) -> usize {
        self.vertices.len()
    }

    /// True when the vertices are exactly `{0, ..., period-1}`.
    pub fn is_maximal(&self) -> bool {
        let p = self.period();
        let mut present = vec![false; p];
        for &v in &self.vertices {
            if v >= p {
                return false;
            }
            present[v] = true;
        }
        present.into_iter().all(|b| b)
    }

    /// The reverse circuit `(i0, i_{p-1}, ..., i1)`, canonicalized.
    pub fn reversed(&self) -> Cycle {
        let mut rev = vec![self.vertices[0]];
        rev.extend(self.vertices[1..].iter().rev());
        Self::canonicalize(rev)
    }
}

impl TryFrom<Vec<usize>> for Cycle {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Cycle::new(v)
    }
}

impl From<Cycle> for Vec<usize> {
    fn from(c: Cycle) -> Vec<usize> {
        c.vertices
    }
}

/// Permutation-matrix realization of a maximal-length cycle.
#[derive(Debug, Clone)]
pub struct PassageMatrix {
    matrix: ComplexMatrix,
    cycle: Cycle,
}

impl PassageMatrix {
    /// `J_c = sum_i |e_{c(i)}><e_{c(i+1)}|` for a maximal cycle on
    /// `{0, ..., p-1}`.
    pub fn from_cycle(cycle: Cycle) -> Result<Self> {
        if !cycle.is_maximal() {
            return Err(Error::InvalidCycle(format!(
                "vertices {:?} do not cover 0..{}",
                cycle.vertices(),
                cycle.period()
            )));
        }
        let p = cycle.period();
        let mut matrix = ComplexMatrix::zeros(p, p);
        for i in 0..p {
            let row = cycle.vertices()[i];
            let col = cycle.vertices()[(i + 1) % p];
            matrix.set(row, col, Complex64::new(1.0, 0.0));
        }
        Ok(Self { matrix, cycle })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn cycle(&self) -> &Cycle {
        &self.cycle
    }

    pub fn dim(&self) -> usize {
        self.cycle.period()
    }
}

/// Passage matrix of the primary cycle `(0, 1, ..., p-1)`: the left-shift
/// operator on the canonical basis.
pub fn primary_permutation(p: usize) -> PassageMatrix {
    let cycle = Cycle::new((0..p).collect()).expect("primary cycle is valid");
    PassageMatrix::from_cycle(cycle).expect("primary cycle is maximal")
}

/// Read a 0/1 permutation matrix into its image map `i -> sigma(i)`, where
/// the single 1 of row `i` sits in column `sigma(i)`.
fn permutation_map(m: &ComplexMatrix) -> Result<Vec<usize>> {
    let n = m.require_square()?;
    let mut map = vec![usize::MAX; n];
    let mut col_used = vec![false; n];
    for i in 0..n {
        let mut hit = None;
        for j in 0..n {
            let z = m.get(i, j);
            if z.im.abs() > BINARY_TOL {
                return Err(Error::NotPermutation(format!(
                    "complex entry at ({i},{j})"
                )));
            }
            if (z.re - 1.0).abs() <= BINARY_TOL {
                if hit.is_some() {
                    return Err(Error::NotPermutation(format!("row {i} has two ones")));
                }
                hit = Some(j);
            } else if z.re.abs() > BINARY_TOL {
                return Err(Error::NotPermutation(format!(
                    "entry ({i},{j}) = {} is neither 0 nor 1",
                    z.re
                )));
            }
        }
        let j = hit.ok_or_else(|| Error::NotPermutation(format!("row {i} has no one")))?;
        if col_used[j] {
            return Err(Error::NotPermutation(format!("column {j} has two ones")));
        }
        col_used[j] = true;
        map[i] = j;
    }
    Ok(map)
}

/// Orbits of a permutation, each traced along the edges `(i, sigma(i))`
/// starting from its smallest vertex; orbits are listed by smallest vertex.
pub fn permutation_orbits(m: &ComplexMatrix) -> Result<Vec<Cycle>> {
    let map = permutation_map(m)?;
    let n = map.len();
    let mut visited = vec![false; n];
    let mut orbits = vec![];
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut orbit = vec![];
        let mut cur = start;
        loop {
            visited[cur] = true;
            orbit.push(cur);
            cur = map[cur];
            if cur == start {
                break;
            }
        }
        orbits.push(Cycle::new(orbit)?);
    }
    Ok(orbits)
}

/// Recover the unique maximal cycle whose passage matrix is `m`.
///
/// Errors with the orbit sizes when the permutation splits into several
/// orbits, and rejects non-permutation input.
pub fn cycle_from_permutation(m: &ComplexMatrix) -> Result<Cycle> {
    let orbits = permutation_orbits(m)?;
    if orbits.len() != 1 {
        let mut sizes: Vec<usize> = orbits.iter().map(|c| c.period()).collect();
        sizes.sort_unstable();
        return Err(Error::ReduciblePermutation { orbit_sizes: sizes });
    }
    Ok(orbits.into_iter().next().unwrap())
}

/// True exactly when `m` is a permutation matrix forming a single orbit of
/// full length, i.e. permutation similar to the primary permutation matrix.
pub fn is_irreducible(m: &ComplexMatrix) -> Result<bool> {
    Ok(permutation_orbits(m)?.len() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_matrix(m: &ComplexMatrix) -> Vec<Vec<u8>> {
        (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.get(i, j).re as u8).collect())
            .collect()
    }

    #[test]
    fn passage_matrix_of_primary_four_cycle() {
        let j = PassageMatrix::from_cycle(Cycle::new(vec![0, 1, 2, 3]).unwrap()).unwrap();
        assert_eq!(
            int_matrix(j.matrix()),
            vec![
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
                vec![1, 0, 0, 0],
            ]
        );
        let primary = primary_permutation(4);
        assert_eq!(primary.matrix().max_abs_diff(j.matrix()), 0.0);
    }

    #[test]
    fn passage_matrix_of_scrambled_cycle() {
        let j = PassageMatrix::from_cycle(Cycle::new(vec![0, 3, 1, 2]).unwrap()).unwrap();
        assert_eq!(
            int_matrix(j.matrix()),
            vec![
                vec![0, 0, 0, 1],
                vec![0, 0, 1, 0],
                vec![1, 0, 0, 0],
                vec![0, 1, 0, 0],
            ]
        );
    }

    #[test]
    fn single_vertex_cycle() {
        let j = PassageMatrix::from_cycle(Cycle::new(vec![0]).unwrap()).unwrap();
        assert_eq!(int_matrix(j.matrix()), vec![vec![1]]);
        assert_eq!(primary_permutation(1).matrix().get(0, 0).re, 1.0);
    }

    #[test]
    fn left_shift_property() {
        // J_c e_{c(i)} = e_{c(i-1)} for every i.
        let cycle = Cycle::new(vec![0, 3, 1, 2]).unwrap();
        let j = PassageMatrix::from_cycle(cycle.clone()).unwrap();
        let p = cycle.period();
        for i in 0..p {
            let mut e = vec![Complex64::new(0.0, 0.0); p];
            e[cycle.vertices()[i]] = Complex64::new(1.0, 0.0);
            let out = j.matrix().mul_vec(&e);
            let prev = cycle.vertices()[(i + p - 1) % p];
            for (k, z) in out.iter().enumerate() {
                let expected = if k == prev { 1.0 } else { 0.0 };
                assert_eq!(z.re, expected);
                assert_eq!(z.im, 0.0);
            }
        }
    }

    #[test]
    fn primary_power_is_identity() {
        let j = primary_permutation(5);
        let mut acc = ComplexMatrix::identity(5);
        for _ in 0..5 {
            acc = acc.matmul(j.matrix());
        }
        assert_eq!(acc.max_abs_diff(&ComplexMatrix::identity(5)), 0.0);
    }

    #[test]
    fn recovers_cycle_from_its_matrix() {
        let j = PassageMatrix::from_cycle(Cycle::new(vec![0, 3, 1, 2]).unwrap()).unwrap();
        let c = cycle_from_permutation(j.matrix()).unwrap();
        assert_eq!(c.vertices(), &[0, 3, 1, 2]);
    }

    #[test]
    fn identity_is_reducible_with_unit_orbits() {
        let err = cycle_from_permutation(&ComplexMatrix::identity(2)).unwrap_err();
        match err {
            Error::ReduciblePermutation { orbit_sizes } => {
                assert_eq!(orbit_sizes, vec![1, 1]);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn squared_shift_on_five_vertices() {
        // J5^2 has ones at (j, j+2); tracing its edges from 0 gives the
        // cycle (0,2,4,1,3), whose passage matrix reproduces J5^2.
        let j = primary_permutation(5);
        let j2 = j.matrix().matmul(j.matrix());
        let c = cycle_from_permutation(&j2).unwrap();
        assert_eq!(c.vertices(), &[0, 2, 4, 1, 3]);
        let rebuilt = PassageMatrix::from_cycle(c).unwrap();
        assert_eq!(rebuilt.matrix().max_abs_diff(&j2), 0.0);
    }

    #[test]
    fn reverse_is_transpose_and_involution() {
        let c = Cycle::new(vec![0, 1, 2, 3]).unwrap();
        assert_eq!(c.reversed().vertices(), &[0, 3, 2, 1]);
        assert_eq!(Cycle::new(vec![5]).unwrap().reversed().vertices(), &[5]);

        let scrambles: [&[usize]; 3] = [&[0, 4, 2, 6, 1, 3, 5], &[0, 2, 1, 5, 6, 3, 4], &[0, 6, 5, 4, 3, 2, 1]];
        for vs in scrambles {
            let c = Cycle::new(vs.to_vec()).unwrap();
            assert_eq!(c.reversed().reversed(), c);
            let j = PassageMatrix::from_cycle(c.clone()).unwrap();
            let jr = PassageMatrix::from_cycle(c.reversed()).unwrap();
            assert_eq!(jr.matrix().max_abs_diff(&j.matrix().transpose()), 0.0);
        }
    }

    #[test]
    fn irreducibility_checks() {
        assert!(is_irreducible(primary_permutation(4).matrix()).unwrap());
        assert!(!is_irreducible(&ComplexMatrix::identity(3)).unwrap());

        // block-diag(J2, J2): two orbits of size 2.
        let mut block = ComplexMatrix::zeros(4, 4);
        for (i, j) in [(0, 1), (1, 0), (2, 3), (3, 2)] {
            block.set(i, j, Complex64::new(1.0, 0.0));
        }
        assert!(!is_irreducible(&block).unwrap());
        match cycle_from_permutation(&block).unwrap_err() {
            Error::ReduciblePermutation { orbit_sizes } => assert_eq!(orbit_sizes, vec![2, 2]),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn prime_powers_irreducible_composite_not() {
        let j5 = primary_permutation(5);
        let mut pw = ComplexMatrix::identity(5);
        for _ in 1..5 {
            pw = pw.matmul(j5.matrix());
            assert!(is_irreducible(&pw).unwrap());
        }
        let j4 = primary_permutation(4);
        let j4sq = j4.matrix().matmul(j4.matrix());
        assert!(!is_irreducible(&j4sq).unwrap());
    }

    #[test]
    fn rejects_invalid_cycles_and_non_permutations() {
        assert!(Cycle::new(vec![0, 1, 1]).is_err());
        assert!(Cycle::new(vec![]).is_err());
        // Non-maximal cycle cannot build a passage matrix.
        assert!(PassageMatrix::from_cycle(Cycle::new(vec![0, 2]).unwrap()).is_err());

        let half = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(matches!(
            cycle_from_permutation(&half),
            Err(Error::NotPermutation(_))
        ));
    }

    #[test]
    fn cycles_serialize_as_integer_arrays() {
        let c = Cycle::new(vec![0, 3, 1, 2]).unwrap();
        assert_eq!(serde_json::to_string(&c).unwrap(), "[0,3,1,2]");
        let back: Cycle = serde_json::from_str("[2,0,3,1]").unwrap();
        assert_eq!(back, c); // canonicalized on deserialize
        assert!(serde_json::from_str::<Cycle>("[0,1,1]").is_err());
    }

    #[test]
    fn canonical_rotation_and_roundtrip_up_to_eight() {
        // Exhaustive round trip over all maximal cycles on p vertices.
        fn permutations(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if rest.is_empty() {
                out.push(cur.clone());
                return;
            }
            for k in 0..rest.len() {
                let v = rest.remove(k);
                cur.push(v);
                permutations(rest, cur, out);
                cur.pop();
                rest.insert(k, v);
            }
        }
        for p in 1..=8usize {
            let mut rest: Vec<usize> = (1..p).collect();
            let mut out = vec![];
            permutations(&mut rest, &mut vec![0], &mut out);
            assert_eq!(out.len(), (1..p).product::<usize>().max(1));
            for vs in out {
                let c = Cycle::new(vs).unwrap();
                let j = PassageMatrix::from_cycle(c.clone()).unwrap();
                assert_eq!(cycle_from_permutation(j.matrix()).unwrap(), c);
            }
        }
    }
}
