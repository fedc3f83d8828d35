//! Exhaustive and random generation of small V-categories and V-functors,
//! isomorphism testing and hom-matrix closures.

use std::sync::Arc;

use rand::Rng;

use super::{require_same_quantale, VCategory, VFunctor};
use crate::error::{Error, Result};
use crate::quantale::{Elem, Quantale};

/// Object cap for universal-property oracles and isomorphism search.
pub const DEFAULT_SIZE_CAP: usize = 5;

/// Cap on `|X| · |Y|` for [`enumerate_vfunctors`].
pub const DEFAULT_FUNCTOR_BOUND: usize = 64;

/// `a, b, c, …`, continuing with `x26, x27, …` past the alphabet.
pub fn default_names(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                char::from(b'a' + i as u8).to_string()
            } else {
                format!("x{i}")
            }
        })
        .collect()
}

/// All V-categories on the objects `a, b, …` (`n` of them), in lexicographic
/// order of their row-major hom matrices.
pub fn enumerate_vcategories(q: &Arc<Quantale>, n: usize) -> Vec<VCategory> {
    let mut out = Vec::new();
    each_hom_matrix(q, n, &mut |hom| {
        out.push(VCategory::new(q.clone(), default_names(n), hom.to_vec()).expect("well formed"));
    });
    out
}

/// [`enumerate_vcategories`] without collecting.
pub fn for_each_vcategory(q: &Arc<Quantale>, n: usize, visit: &mut dyn FnMut(&VCategory)) {
    let names = default_names(n);
    each_hom_matrix(q, n, &mut |hom| {
        visit(&VCategory::new(q.clone(), names.clone(), hom.to_vec()).expect("well formed"));
    });
}

/// One representative per isomorphism class: the member whose hom matrix is
/// lexicographically least among its relabellings.
pub fn enumerate_vcategories_up_to_iso(q: &Arc<Quantale>, n: usize) -> Vec<VCategory> {
    let perms = permutations(n);
    let mut out = Vec::new();
    each_hom_matrix(q, n, &mut |hom| {
        if perms.iter().all(|p| permuted(hom, n, p).as_slice() >= hom) {
            out.push(VCategory::new(q.clone(), default_names(n), hom.to_vec()).expect("well formed"));
        }
    });
    out
}

/// Lexicographically least hom matrix among all relabellings of `x`.
pub fn canonical_hom(x: &VCategory) -> Vec<Elem> {
    let n = x.len();
    permutations(n)
        .iter()
        .map(|p| permuted(x.hom_matrix(), n, p))
        .min()
        .unwrap_or_default()
}

// Backtracking over off-diagonal entries; diagonal entries are ⊤. A triple
// is checked as soon as its three entries are assigned.
fn each_hom_matrix(q: &Quantale, n: usize, emit: &mut dyn FnMut(&[Elem])) {
    let mut hom = vec![q.top(); n * n];
    let cells: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut assigned = vec![false; n * n];
    for i in 0..n {
        assigned[i * n + i] = true;
    }
    fn go(
        q: &Quantale,
        n: usize,
        cells: &[(usize, usize)],
        pos: usize,
        hom: &mut Vec<Elem>,
        assigned: &mut Vec<bool>,
        emit: &mut dyn FnMut(&[Elem]),
    ) {
        if pos == cells.len() {
            emit(hom);
            return;
        }
        let (i, j) = cells[pos];
        assigned[i * n + j] = true;
        for e in q.elements() {
            hom[i * n + j] = e;
            if consistent_at(q, n, hom, assigned, i, j) {
                go(q, n, cells, pos + 1, hom, assigned, emit);
            }
        }
        assigned[i * n + j] = false;
        hom[i * n + j] = q.top();
    }
    go(q, n, &cells, 0, &mut hom, &mut assigned, emit);
}

fn consistent_at(q: &Quantale, n: usize, hom: &[Elem], set: &[bool], i: usize, j: usize) -> bool {
    let h = |a: usize, b: usize| hom[a * n + b];
    let s = |a: usize, b: usize| set[a * n + b];
    (0..n).all(|k| {
        (!(s(i, k) && s(k, j)) || q.leq(q.tensor(h(i, k), h(k, j)), h(i, j)))
            && (!s(j, k) || !s(i, k) || q.leq(q.tensor(h(i, j), h(j, k)), h(i, k)))
            && (!s(k, i) || !s(k, j) || q.leq(q.tensor(h(k, i), h(i, j)), h(k, j)))
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn heap(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(p.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, p, out);
            let swap = if k.is_multiple_of(2) { i } else { 0 };
            p.swap(swap, k - 1);
        }
    }
    heap(n, &mut p, &mut out);
    out
}

// Matrix of the structure relabelled so that new object `a` is old `p[a]`.
fn permuted(hom: &[Elem], n: usize, p: &[usize]) -> Vec<Elem> {
    (0..n * n).map(|k| hom[p[k / n] * n + p[k % n]]).collect()
}

/// V-functors `x → y` in lexicographic order of their object maps, under
/// [`DEFAULT_FUNCTOR_BOUND`].
pub fn enumerate_vfunctors(x: &VCategory, y: &VCategory) -> Result<Vec<VFunctor>> {
    enumerate_vfunctors_with_bound(x, y, DEFAULT_FUNCTOR_BOUND)
}

pub fn enumerate_vfunctors_with_bound(
    x: &VCategory,
    y: &VCategory,
    bound: usize,
) -> Result<Vec<VFunctor>> {
    require_same_quantale(x, y)?;
    let size = x.len() * y.len();
    if size > bound {
        return Err(Error::BoundExceeded {
            what: "functor enumeration |X|·|Y|",
            size,
            bound,
        });
    }
    let q = x.quantale();
    let mut out = Vec::new();
    let mut map = vec![0; x.len()];
    fn go(
        q: &Quantale,
        x: &VCategory,
        y: &VCategory,
        i: usize,
        map: &mut Vec<usize>,
        out: &mut Vec<VFunctor>,
    ) {
        if i == x.len() {
            out.push(VFunctor::new(x.clone(), y.clone(), map.clone()).expect("in range"));
            return;
        }
        for t in 0..y.len() {
            map[i] = t;
            let ok = (0..=i).all(|j| {
                q.leq(x.hom(i, j), y.hom(t, map[j])) && q.leq(x.hom(j, i), y.hom(map[j], t))
            });
            if ok {
                go(q, x, y, i + 1, map, out);
            }
        }
    }
    if x.is_empty() || !y.is_empty() {
        go(q, x, y, 0, &mut map, &mut out);
    }
    Ok(out)
}

/// A hom-preserving-and-reflecting bijection `x → y` if one exists, as the
/// image index of each object of `x`.
pub fn is_isomorphic(x: &VCategory, y: &VCategory) -> Result<Option<Vec<usize>>> {
    require_same_quantale(x, y)?;
    if x.len() > DEFAULT_SIZE_CAP {
        return Err(Error::BoundExceeded {
            what: "isomorphism search",
            size: x.len(),
            bound: DEFAULT_SIZE_CAP,
        });
    }
    if x.len() != y.len() {
        return Ok(None);
    }
    fn go(x: &VCategory, y: &VCategory, i: usize, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        if i == x.len() {
            return true;
        }
        for t in 0..y.len() {
            if used[t] {
                continue;
            }
            map[i] = t;
            let ok = (0..=i).all(|j| x.hom(i, j) == y.hom(t, map[j]) && x.hom(j, i) == y.hom(map[j], t));
            if ok {
                used[t] = true;
                if go(x, y, i + 1, map, used) {
                    return true;
                }
                used[t] = false;
            }
        }
        false
    }
    let mut map = vec![0; x.len()];
    let mut used = vec![false; y.len()];
    Ok(go(x, y, 0, &mut map, &mut used).then_some(map))
}

/// Raises `hom` (an `n × n` matrix) to the least matrix above it that
/// satisfies `hom(i, k) ⊗ hom(k, j) ≤ hom(i, j)`.
pub fn close_under_tensor(q: &Quantale, n: usize, hom: &mut [Elem]) {
    close_with(n, hom, |a, b| q.tensor(a, b), |a, b| q.join_pair(a, b));
}

/// As [`close_under_tensor`] with `∧` in place of `⊗`.
pub fn close_under_meet(q: &Quantale, n: usize, hom: &mut [Elem]) {
    close_with(n, hom, |a, b| q.meet_pair(a, b), |a, b| q.join_pair(a, b));
}

fn close_with(
    n: usize,
    hom: &mut [Elem],
    op: impl Fn(Elem, Elem) -> Elem,
    join: impl Fn(Elem, Elem) -> Elem,
) {
    loop {
        let mut changed = false;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = op(hom[i * n + k], hom[k * n + j]);
                    let joined = join(hom[i * n + j], via);
                    if joined != hom[i * n + j] {
                        hom[i * n + j] = joined;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// Uniform random matrix with `⊤` on the diagonal, closed under `⊗`.
pub fn random_vcategory<R: Rng + ?Sized>(q: &Arc<Quantale>, n: usize, rng: &mut R) -> VCategory {
    let mut hom = random_matrix(q, n, rng, false);
    close_under_tensor(q, n, &mut hom);
    VCategory::new(q.clone(), default_names(n), hom).expect("well formed")
}

/// Random symmetric matrix closed under `∧`; always a symmetric
/// V∧-category.
pub fn random_symmetric_wedge<R: Rng + ?Sized>(q: &Arc<Quantale>, n: usize, rng: &mut R) -> VCategory {
    let mut hom = random_matrix(q, n, rng, true);
    close_under_meet(q, n, &mut hom);
    VCategory::new(q.clone(), default_names(n), hom).expect("well formed")
}

fn random_matrix<R: Rng + ?Sized>(q: &Quantale, n: usize, rng: &mut R, symmetric: bool) -> Vec<Elem> {
    let mut hom = vec![q.top(); n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j || (symmetric && j < i) {
                continue;
            }
            let e = Elem(rng.gen_range(0..q.len()));
            hom[i * n + j] = e;
            if symmetric {
                hom[j * n + i] = e;
            }
        }
    }
    hom
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::vcat::verify_vcategory;

    fn brute_force_count(q: &Quantale, n: usize) -> usize {
        let cells = n * n - n;
        let total = q.len().pow(cells as u32);
        let q = Arc::new(q.clone());
        (0..total)
            .filter(|&mut_code| {
                let mut code = mut_code;
                let mut hom = vec![q.top(); n * n];
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            hom[i * n + j] = Elem(code % q.len());
                            code /= q.len();
                        }
                    }
                }
                verify_vcategory(&VCategory::new(q.clone(), default_names(n), hom).unwrap()).holds()
            })
            .count()
    }

    #[test]
    fn backtracking_matches_brute_force() {
        for name in Quantale::fixture_names() {
            let q = Quantale::fixture(name).unwrap();
            for n in 0..=3 {
                let arc = Arc::new(q.clone());
                let all = enumerate_vcategories(&arc, n);
                assert_eq!(all.len(), brute_force_count(&q, n), "{name} n={n}");
                assert!(all.iter().all(|x| verify_vcategory(x).holds()));
            }
        }
    }

    #[test]
    fn preorder_counts_over_two() {
        // labelled preorders: 1, 1, 4, 29, 355
        let q = Arc::new(Quantale::two());
        let counts: Vec<usize> = (0..=4).map(|n| enumerate_vcategories(&q, n).len()).collect();
        assert_eq!(counts, vec![1, 1, 4, 29, 355]);
        // unlabelled: 1, 1, 3, 9, 33
        let iso: Vec<usize> = (0..=4)
            .map(|n| enumerate_vcategories_up_to_iso(&q, n).len())
            .collect();
        assert_eq!(iso, vec![1, 1, 3, 9, 33]);
    }

    #[test]
    fn functor_enumeration_examples() {
        let q = Arc::new(Quantale::two());
        let disc = VCategory::discrete(q.clone(), &["p", "q"]);
        let chain = VCategory::from_entries(q.clone(), &["a", "b"], &[("a", "b", "1")]).unwrap();
        assert_eq!(enumerate_vfunctors(&disc, &chain).unwrap().len(), 4);
        let to_disc = enumerate_vfunctors(&chain, &disc).unwrap();
        assert_eq!(to_disc.iter().map(|f| f.map().to_vec()).collect::<Vec<_>>(), vec![vec![0, 0], vec![1, 1]]);
        let e = VCategory::empty(q.clone());
        assert_eq!(enumerate_vfunctors(&e, &chain).unwrap().len(), 1);
        assert_eq!(enumerate_vfunctors(&chain, &e).unwrap().len(), 0);
        let big = VCategory::discrete(q, &default_names(9));
        assert!(matches!(
            enumerate_vfunctors(&big, &big),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn isomorphism_search() {
        let q = Arc::new(Quantale::two());
        let ab = VCategory::from_entries(q.clone(), &["a", "b"], &[("a", "b", "1")]).unwrap();
        let ba = VCategory::from_entries(q.clone(), &["a", "b"], &[("b", "a", "1")]).unwrap();
        assert_eq!(is_isomorphic(&ab, &ba).unwrap(), Some(vec![1, 0]));
        assert_eq!(canonical_hom(&ab), canonical_hom(&ba));
        let disc = VCategory::discrete(q, &["a", "b"]);
        assert_eq!(is_isomorphic(&ab, &disc).unwrap(), None);
    }

    #[test]
    fn random_generators_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for name in Quantale::fixture_names() {
            let q = Arc::new(Quantale::fixture(name).unwrap());
            for n in 0..5 {
                assert!(verify_vcategory(&random_vcategory(&q, n, &mut rng)).holds());
                let w = random_symmetric_wedge(&q, n, &mut rng);
                assert!(w.is_symmetric());
                assert!(verify_vcategory(&w).holds());
            }
        }
    }

    #[test]
    fn permutations_are_complete() {
        let mut p = permutations(4);
        assert_eq!(p.len(), 24);
        p.sort();
        p.dedup();
        assert_eq!(p.len(), 24);
    }
}
