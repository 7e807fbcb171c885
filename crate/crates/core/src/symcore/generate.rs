//! Random and exhaustive generators for V*(k) systems.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lemmas::{applicable, Lemma};
use super::{check_vstar, MultiplicityVector, VectorSystem};
use crate::verify::next_combination;

/// A vector with 0/1 head, arbitrary last coordinate, and `|v| <= k - 1`.
pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> MultiplicityVector {
    loop {
        let density = rng.random_range(0.2..0.8);
        let mut e: Vec<u32> = (0..n - 1).map(|_| rng.random_bool(density) as u32).collect();
        let head: usize = e.iter().map(|&b| b as usize).sum();
        if head + 1 > k {
            continue;
        }
        e.push(rng.random_range(0..=(k - 1 - head) as u32));
        return MultiplicityVector::new(e);
    }
}

/// Rejection sampling of an `m`-vector V*(k) system in `N^n`.
pub fn random_vstar<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize, m: usize, attempts: usize) -> Option<VectorSystem> {
    (0..attempts).find_map(|_| {
        let vs = (0..m).map(|_| random_vector(rng, n, k)).collect();
        let sys = VectorSystem::new(n, k, vs).ok()?;
        check_vstar(&sys).is_satisfied().then_some(sys)
    })
}

/// `count` random V*(k) systems with `n <= max_n`, `k <= max_k`, `m <= max_m`.
pub fn random_vstar_systems(count: usize, max_n: usize, max_k: usize, max_m: usize, seed: u64) -> Vec<VectorSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.random_range(1..=max_n);
        let k = rng.random_range(1..=max_k);
        let m = rng.random_range(1..=max_m);
        if let Some(s) = random_vstar(&mut rng, n, k, m, 200) {
            out.push(s);
        }
    }
    out
}

fn divide_candidate(rng: &mut ChaCha8Rng, n: usize, k: usize, m: usize) -> Option<VectorSystem> {
    let base = random_vstar(rng, n, k - 1, m, 200)?;
    let coords: Vec<usize> = (1..=n).filter(|&j| j == n || base.vectors().iter().all(|v| v.get(j) == 0)).collect();
    let j = coords[rng.random_range(0..coords.len())];
    let vs = base
        .vectors()
        .iter()
        .map(|v| {
            let mut e = v.entries().to_vec();
            e[j - 1] += 1;
            MultiplicityVector::new(e)
        })
        .collect();
    VectorSystem::new(n, k, vs).ok()
}

fn increment_candidate(rng: &mut ChaCha8Rng, n: usize, k: usize, m: usize) -> Option<VectorSystem> {
    if n >= k {
        return None;
    }
    let mut vs = if m > 1 { random_vstar(rng, n, k, m - 1, 200)?.vectors().to_vec() } else { Vec::new() };
    let mut e = vec![1; n];
    e[n - 1] = 0;
    vs.insert(rng.random_range(0..=vs.len()), MultiplicityVector::new(e));
    VectorSystem::new(n, k, vs).ok()
}

/// `count` V*(k) systems, each satisfying the preconditions of `lemma`.
/// Stops early if no instance turns up for a long stretch.
pub fn lemma_instances(lemma: Lemma, count: usize, seed: u64) -> Vec<VectorSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut misses = 0usize;
    while out.len() < count && misses < 200_000 {
        let n = rng.random_range(2..=5);
        let k = rng.random_range(2..=6);
        let m = rng.random_range(if lemma == Lemma::TightSplit { 3 } else { 1 }..=5);
        let cand = match lemma {
            Lemma::Divide => divide_candidate(&mut rng, n, k, m),
            Lemma::IncrementLast => increment_candidate(&mut rng, n, k, m),
            Lemma::TightSplit | Lemma::MergeLast => random_vstar(&mut rng, n, k, m, 50),
        };
        match cand.filter(|s| applicable(lemma, s).is_some()) {
            Some(s) => out.push(s),
            None => misses += 1,
        }
    }
    out
}

/// Every vector allowed in a V*(k) system in `N^n`, in lexicographic order.
pub fn vstar_vectors(n: usize, k: usize) -> Vec<MultiplicityVector> {
    let mut out = Vec::new();
    for head in 0u32..1 << (n - 1) {
        let h = head.count_ones() as usize;
        if h + 1 > k {
            continue;
        }
        for last in 0..=(k - 1 - h) as u32 {
            let mut e: Vec<u32> = (0..n - 1).map(|j| head >> (n - 2 - j) & 1).collect();
            e.push(last);
            out.push(MultiplicityVector::new(e));
        }
    }
    out.sort();
    out
}

/// V*(k) systems of up to `max_m` vectors, listed by size and then
/// lexicographically. Repeated vectors always violate V(k), so only sets are
/// listed. At most `budget` candidate systems are examined.
pub fn enumerate_vstar(n: usize, k: usize, max_m: usize, budget: usize) -> Vec<VectorSystem> {
    let cands = vstar_vectors(n, k);
    let mut out = Vec::new();
    let mut examined = 0;
    for m in 1..=max_m.min(cands.len()) {
        let mut c: Vec<usize> = (0..m).collect();
        loop {
            if examined == budget {
                return out;
            }
            examined += 1;
            let sys = VectorSystem::new(n, k, c.iter().map(|&i| cands[i].clone()).collect()).expect("valid shape");
            if check_vstar(&sys).is_satisfied() {
                out.push(sys);
            }
            if !next_combination(&mut c, cands.len()) {
                break;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_systems_satisfy_vstar() {
        let systems = random_vstar_systems(100, 5, 6, 5, 1);
        assert_eq!(systems.len(), 100);
        assert!(systems.iter().all(|s| check_vstar(s).is_satisfied()));
        assert_eq!(systems, random_vstar_systems(100, 5, 6, 5, 1));
    }

    #[test]
    fn vector_list() {
        let v = vstar_vectors(2, 3);
        let e: Vec<Vec<u32>> = v.iter().map(|v| v.entries().to_vec()).collect();
        assert_eq!(e, vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 0], vec![1, 1]]);
        // Oracle: sum over head weights h of C(3, h) (5 - h).
        assert_eq!(vstar_vectors(4, 5).len(), 5 + 3 * 4 + 3 * 3 + 2);
    }

    #[test]
    fn enumeration_is_complete_for_tiny_cases() {
        // n = 2, k = 2: vectors (0,0), (0,1), (1,0). Pairs {(0,1),(1,0)} score
        // 1 + 1 + 0 = 2 and are fine; anything with (0,0) alongside another is not.
        let all = enumerate_vstar(2, 2, 3, usize::MAX);
        let e: Vec<Vec<Vec<u32>>> =
            all.iter().map(|s| s.vectors().iter().map(|v| v.entries().to_vec()).collect()).collect();
        assert_eq!(
            e,
            vec![vec![vec![0, 0]], vec![vec![0, 1]], vec![vec![1, 0]], vec![vec![0, 1], vec![1, 0]]]
        );
        assert_eq!(enumerate_vstar(2, 2, 3, 2).len(), 2);
    }
}
