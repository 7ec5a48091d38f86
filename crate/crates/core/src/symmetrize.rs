//! Diagonal symmetrizability.
//!
//! A real matrix `A` admits an invertible diagonal `T` with `T⁻¹AT`
//! symmetric exactly when it is sign-symmetric and every directed cycle of
//! its off-diagonal support has equal forward and reverse weight products.
//! [`symmetrize`] decides this with a breadth-first spanning forest: tree
//! edges fix the ratios `T_jj/T_ii = √(A_ji/A_ij)` and each remaining edge is
//! checked against the balance relation `A_ij = A_ji (T_ii/T_jj)²`.
//! [`check_cycle_condition`] is the brute-force counterpart used as an
//! oracle for small matrices.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::SquareMatrix;

/// Entries with magnitude below this are treated as exact zeros.
pub const SIGN_FLOOR: f64 = 1e-300;
/// Relative tolerance for equality of cycle products (and of the balance
/// relation on non-tree edges).
pub const CYCLE_TOL: f64 = 1e-9;
/// Largest dimension accepted by the brute-force cycle enumeration.
pub const BRUTE_FORCE_MAX_DIM: usize = 8;

fn sgn(x: f64) -> i8 {
    if x.abs() < SIGN_FLOOR {
        0
    } else if x > 0.0 {
        1
    } else {
        -1
    }
}

fn has_edge(a: &SquareMatrix, i: usize, j: usize) -> bool {
    i != j && sgn(a[(i, j)]) != 0
}

fn products_agree(forward: f64, reverse: f64) -> bool {
    (forward - reverse).abs() <= CYCLE_TOL * forward.abs().max(reverse.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Symmetrizable,
    NotSignSymmetric,
    CycleViolation,
    ZeroPatternAsymmetric,
}

/// A simple cycle `indices[0] → indices[1] → … → indices[0]` with its
/// forward and reverse weight products.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleWitness {
    pub indices: Vec<usize>,
    pub forward: f64,
    pub reverse: f64,
}

impl CycleWitness {
    fn from_cycle(a: &SquareMatrix, indices: Vec<usize>) -> Self {
        let k = indices.len();
        let mut forward = 1.0;
        let mut reverse = 1.0;
        for m in 0..k {
            let (u, v) = (indices[m], indices[(m + 1) % k]);
            forward *= a[(u, v)];
            reverse *= a[(v, u)];
        }
        Self {
            indices,
            forward,
            reverse,
        }
    }

    /// Rotates the cycle to start at its smallest index and orients it
    /// towards the smaller of the two neighbours.
    fn canonical(a: &SquareMatrix, mut indices: Vec<usize>) -> Self {
        let start = indices
            .iter()
            .enumerate()
            .min_by_key(|&(_, v)| *v)
            .map(|(p, _)| p)
            .unwrap_or(0);
        indices.rotate_left(start);
        if indices.len() > 2 && indices[indices.len() - 1] < indices[1] {
            indices[1..].reverse();
        }
        Self::from_cycle(a, indices)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// Off-diagonal pair `(i, j)` whose signs (or zero pattern) disagree.
    Pair(usize, usize),
    Cycle(CycleWitness),
}

/// Result of a yes/no structural test with an optional counterexample.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome<W> {
    pub holds: bool,
    pub witness: Option<W>,
}

impl<W> CheckOutcome<W> {
    fn pass() -> Self {
        Self {
            holds: true,
            witness: None,
        }
    }

    fn fail(w: W) -> Self {
        Self {
            holds: false,
            witness: Some(w),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SymmetrizationCertificate {
    pub verdict: Verdict,
    /// Diagonal of `T` (present iff symmetrizable).
    pub scaling: Option<Vec<f64>>,
    /// `Ã = T⁻¹AT` (present iff symmetrizable).
    pub symmetrized: Option<SquareMatrix>,
    pub witness: Option<Witness>,
    /// `max |Ã_ij − Ã_ji|` for the scaling that was built; for sign
    /// failures no scaling is attempted and this is the asymmetry of `A`.
    pub residual: f64,
}

impl SymmetrizationCertificate {
    pub fn is_symmetrizable(&self) -> bool {
        self.verdict == Verdict::Symmetrizable
    }

    fn failure(verdict: Verdict, witness: Witness, residual: f64) -> Self {
        Self {
            verdict,
            scaling: None,
            symmetrized: None,
            witness: Some(witness),
            residual,
        }
    }
}

/// First off-diagonal pair, in row-major order, whose signs differ.
/// Exact zeros have sign 0.
pub fn check_sign_symmetric(a: &SquareMatrix) -> CheckOutcome<(usize, usize)> {
    let n = a.dim();
    for i in 0..n {
        for j in 0..n {
            if i != j && sgn(a[(i, j)]) != sgn(a[(j, i)]) {
                return CheckOutcome::fail((i, j));
            }
        }
    }
    CheckOutcome::pass()
}

/// Enumerates every simple directed cycle of length ≥ 3 and compares its
/// forward and reverse products. Exponential; limited to
/// [`BRUTE_FORCE_MAX_DIM`].
pub fn check_cycle_condition(a: &SquareMatrix) -> Result<CheckOutcome<CycleWitness>> {
    let n = a.dim();
    if n > BRUTE_FORCE_MAX_DIM {
        return Err(Error::InvalidInput(format!(
            "brute-force cycle enumeration is limited to n <= {BRUTE_FORCE_MAX_DIM}, got {n}; \
             use symmetrize instead"
        )));
    }
    if !check_sign_symmetric(a).holds {
        return Err(Error::Precondition("matrix is not sign-symmetric".into()));
    }
    let mut path = Vec::with_capacity(n);
    let mut on_path = vec![false; n];
    for start in 0..n {
        path.clear();
        path.push(start);
        on_path[start] = true;
        let found = search_cycles(a, start, &mut path, &mut on_path);
        on_path[start] = false;
        if let Some(w) = found {
            return Ok(CheckOutcome::fail(w));
        }
    }
    Ok(CheckOutcome::pass())
}

fn search_cycles(
    a: &SquareMatrix,
    start: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
) -> Option<CycleWitness> {
    let n = a.dim();
    let last = *path.last().expect("path starts non-empty");
    for next in (start + 1)..n {
        if on_path[next] || !has_edge(a, last, next) {
            continue;
        }
        path.push(next);
        on_path[next] = true;
        if path.len() >= 3 && has_edge(a, next, start) {
            let w = CycleWitness::from_cycle(a, path.clone());
            if !products_agree(w.forward, w.reverse) {
                return Some(w);
            }
        }
        let found = search_cycles(a, start, path, on_path);
        on_path[next] = false;
        path.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Decides diagonal symmetrizability and builds `T` and `Ã = T⁻¹AT`.
pub fn symmetrize(a: &SquareMatrix) -> SymmetrizationCertificate {
    let n = a.dim();

    for i in 0..n {
        for j in 0..n {
            let (sij, sji) = (sgn(a[(i, j)]), sgn(a[(j, i)]));
            if i == j || sij == sji {
                continue;
            }
            let verdict = if sij == 0 || sji == 0 {
                Verdict::ZeroPatternAsymmetric
            } else {
                Verdict::NotSignSymmetric
            };
            return SymmetrizationCertificate::failure(
                verdict,
                Witness::Pair(i, j),
                a.max_asymmetry(),
            );
        }
    }

    let mut scaling = vec![0.0; n];
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut depth = vec![0usize; n];
    let mut visited = vec![false; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        scaling[root] = 1.0;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if visited[v] || !has_edge(a, u, v) {
                    continue;
                }
                visited[v] = true;
                scaling[v] = scaling[u] * (a[(v, u)] / a[(u, v)]).sqrt();
                parent[v] = Some(u);
                depth[v] = depth[u] + 1;
                queue.push_back(v);
            }
        }
    }

    let mut sym = a.clone();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sym[(i, j)] = a[(i, j)] * scaling[j] / scaling[i];
            }
        }
    }
    let residual = sym.max_asymmetry();

    for i in 0..n {
        for j in (i + 1)..n {
            if !has_edge(a, i, j) || parent[j] == Some(i) || parent[i] == Some(j) {
                continue;
            }
            if !products_agree(sym[(i, j)], sym[(j, i)]) {
                let cycle = fundamental_cycle(&parent, &depth, i, j);
                return SymmetrizationCertificate {
                    verdict: Verdict::CycleViolation,
                    scaling: None,
                    symmetrized: None,
                    witness: Some(Witness::Cycle(CycleWitness::canonical(a, cycle))),
                    residual,
                };
            }
        }
    }

    SymmetrizationCertificate {
        verdict: Verdict::Symmetrizable,
        scaling: Some(scaling),
        symmetrized: Some(sym),
        witness: None,
        residual,
    }
}

/// Tree path `i → … → lca → … → j`; the non-tree edge `j → i` closes it.
fn fundamental_cycle(parent: &[Option<usize>], depth: &[usize], i: usize, j: usize) -> Vec<usize> {
    let (mut u, mut v) = (i, j);
    let mut up = vec![u];
    let mut down = vec![v];
    while depth[u] > depth[v] {
        u = parent[u].expect("non-root has a parent");
        up.push(u);
    }
    while depth[v] > depth[u] {
        v = parent[v].expect("non-root has a parent");
        down.push(v);
    }
    while u != v {
        u = parent[u].expect("non-root has a parent");
        v = parent[v].expect("non-root has a parent");
        up.push(u);
        down.push(v);
    }
    down.pop();
    up.extend(down.into_iter().rev());
    up
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> SquareMatrix {
        SquareMatrix::from_rows(rows).unwrap()
    }

    fn cycle_violator() -> SquareMatrix {
        // A12 A23 A31 = 1·2·3 = 6, A13 A32 A21 = 1·1·5 = 5
        m(&[&[0.0, 1.0, 1.0], &[5.0, 0.0, 2.0], &[3.0, 1.0, 0.0]])
    }

    #[test]
    fn sign_symmetry() {
        assert!(check_sign_symmetric(&m(&[&[1.0, 2.0], &[3.0, 1.0]])).holds);
        let rot = check_sign_symmetric(&m(&[&[0.0, -1.0], &[1.0, 0.0]]));
        assert!(!rot.holds);
        assert_eq!(rot.witness, Some((0, 1)));
        let sth = m(&[&[-0.0028, 1.3e-8], &[5000.0, -0.016]]);
        assert!(check_sign_symmetric(&sth).holds);
    }

    #[test]
    fn two_by_two_always_satisfies_cycles() {
        let a = m(&[&[1.0, -7.0], &[-0.1, 4.0]]);
        assert!(check_cycle_condition(&a).unwrap().holds);
    }

    #[test]
    fn brute_force_finds_three_cycle() {
        let out = check_cycle_condition(&cycle_violator()).unwrap();
        assert!(!out.holds);
        let w = out.witness.unwrap();
        assert_eq!(w.indices, vec![0, 1, 2]);
        assert_eq!(w.forward, 6.0);
        assert_eq!(w.reverse, 5.0);
    }

    #[test]
    fn tridiagonal_sign_symmetric_passes() {
        let a = m(&[
            &[1.0, 2.0, 0.0, 0.0],
            &[0.5, -1.0, -3.0, 0.0],
            &[0.0, -0.2, 2.0, 4.0],
            &[0.0, 0.0, 9.0, 0.0],
        ]);
        assert!(check_cycle_condition(&a).unwrap().holds);
        assert!(symmetrize(&a).is_symmetrizable());
    }

    #[test]
    fn brute_force_rejects_large_or_unsigned_input() {
        let big = SquareMatrix::identity(9);
        assert!(matches!(
            check_cycle_condition(&big),
            Err(Error::InvalidInput(_))
        ));
        let rot = m(&[&[0.0, -1.0], &[1.0, 0.0]]);
        assert!(matches!(
            check_cycle_condition(&rot),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn symmetric_input_is_its_own_certificate() {
        let a = m(&[&[1.0, 2.0, 0.0], &[2.0, 3.0, -1.0], &[0.0, -1.0, 4.0]]);
        let cert = symmetrize(&a);
        assert_eq!(cert.verdict, Verdict::Symmetrizable);
        assert_eq!(cert.scaling.as_deref(), Some(&[1.0, 1.0, 1.0][..]));
        assert_eq!(cert.symmetrized.unwrap(), a);
        assert_eq!(cert.residual, 0.0);
    }

    #[test]
    fn roundworm_matrix() {
        let a = m(&[&[-0.0028, 1.3e-8], &[5000.0, -0.016]]);
        let cert = symmetrize(&a);
        assert!(cert.is_symmetrizable());
        let t = cert.scaling.unwrap();
        let ratio = (t[0] / t[1]).powi(2);
        assert!((ratio - 2.6e-12).abs() <= 1e-12 * 2.6e-12);
        let sym = cert.symmetrized.unwrap();
        let off = (6.5e-5f64).sqrt();
        assert!((sym[(0, 1)] - off).abs() <= 1e-14 * off);
        assert!((sym[(1, 0)] - off).abs() <= 1e-14 * off);
        assert_eq!(sym[(0, 0)], -0.0028);
    }

    #[test]
    fn cycle_violation_witness_matches_brute_force() {
        let cert = symmetrize(&cycle_violator());
        assert_eq!(cert.verdict, Verdict::CycleViolation);
        match cert.witness {
            Some(Witness::Cycle(w)) => {
                assert_eq!(w.indices, vec![0, 1, 2]);
                assert_eq!((w.forward, w.reverse), (6.0, 5.0));
            }
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn sign_failures() {
        let rot = symmetrize(&m(&[&[0.0, -1.0], &[1.0, 0.0]]));
        assert_eq!(rot.verdict, Verdict::NotSignSymmetric);
        assert_eq!(rot.witness, Some(Witness::Pair(0, 1)));
        assert!(rot.scaling.is_none() && rot.symmetrized.is_none());

        let tri = symmetrize(&m(&[&[1.0, 0.0], &[2.0, 1.0]]));
        assert_eq!(tri.verdict, Verdict::ZeroPatternAsymmetric);
        assert_eq!(tri.witness, Some(Witness::Pair(0, 1)));
    }

    #[test]
    fn entries_below_floor_count_as_zero() {
        let a = m(&[&[1.0, 1e-301], &[0.0, 1.0]]);
        assert!(check_sign_symmetric(&a).holds);
        assert!(symmetrize(&a).is_symmetrizable());
    }

    #[test]
    fn disconnected_components_are_rooted_separately() {
        // components {0, 2} and {1, 3}
        let a = m(&[
            &[1.0, 0.0, 4.0, 0.0],
            &[0.0, 2.0, 0.0, -2.0],
            &[1.0, 0.0, 3.0, 0.0],
            &[0.0, -8.0, 0.0, 1.0],
        ]);
        let cert = symmetrize(&a);
        assert!(cert.is_symmetrizable());
        let t = cert.scaling.unwrap();
        assert_eq!(t[0], 1.0);
        assert_eq!(t[1], 1.0);
        assert_eq!(t[2], 0.5);
        assert_eq!(t[3], 2.0);
        assert_eq!(cert.symmetrized.unwrap().max_asymmetry(), 0.0);
    }

    #[test]
    fn fundamental_cycle_in_longer_graph() {
        // 4-cycle 0-1-2-3-0 with a consistent tree but inconsistent closure
        let a = m(&[
            &[0.0, 1.0, 0.0, 1.0],
            &[1.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 1.0],
            &[2.0, 0.0, 1.0, 0.0],
        ]);
        let cert = symmetrize(&a);
        assert_eq!(cert.verdict, Verdict::CycleViolation);
        let Some(Witness::Cycle(w)) = cert.witness else {
            panic!("expected cycle")
        };
        assert_eq!(w.indices, vec![0, 1, 2, 3]);
        assert!(!products_agree(w.forward, w.reverse));
        assert!(!check_cycle_condition(&a).unwrap().holds);
    }
}
