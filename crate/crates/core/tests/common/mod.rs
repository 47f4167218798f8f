//! Brute-force references shared by the integration tests. Nothing here
//! calls into the library's own enumeration code.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Histogram of total displacement over all `m^n` hash sequences, optionally
/// keeping only those that leave cell 0 empty. Uses a plain table walk.
pub fn enumerate_displacements(m: usize, n: usize, confined_only: bool) -> BTreeMap<u64, u64> {
    let mut hist = BTreeMap::new();
    let total = (m as u64).pow(n as u32);
    for code in 0..total {
        let mut rest = code;
        let mut table: Vec<Option<usize>> = vec![None; m];
        let mut d = 0u64;
        for item in 0..n {
            let h = (rest % m as u64) as usize;
            rest /= m as u64;
            let mut offset = 0;
            while table[(h + offset) % m].is_some() {
                offset += 1;
            }
            table[(h + offset) % m] = Some(item);
            d += offset as u64;
        }
        if !confined_only || table[0].is_none() {
            *hist.entry(d).or_insert(0) += 1;
        }
    }
    hist
}

/// Dense coefficient vector of a histogram.
pub fn dense(hist: &BTreeMap<u64, u64>) -> Vec<BigInt> {
    let len = hist.keys().next_back().map_or(0, |&d| d as usize + 1);
    let mut out = vec![BigInt::from(0); len];
    for (&d, &c) in hist {
        out[d as usize] = BigInt::from(c);
    }
    out
}

/// `E[C(d, j)]` straight from a histogram.
pub fn factorial_moment(hist: &BTreeMap<u64, u64>, j: u64) -> BigRational {
    let mut num = BigInt::from(0);
    let mut den = BigInt::from(0);
    for (&d, &c) in hist {
        num += choose(d, j) * BigInt::from(c);
        den += BigInt::from(c);
    }
    BigRational::new(num, den)
}

pub fn choose(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Connected labelled graphs on `v` vertices, by edge count, via subsets of
/// the edge set and union-find.
pub fn connected_graphs(v: usize) -> BTreeMap<usize, u64> {
    let edges: Vec<(usize, usize)> = (0..v).flat_map(|a| (a + 1..v).map(move |b| (a, b))).collect();
    let mut out = BTreeMap::new();
    for mask in 0u64..(1u64 << edges.len()) {
        let mut parent: Vec<usize> = (0..v).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        let mut components = v;
        for (i, &(a, b)) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                    components -= 1;
                }
            }
        }
        if components == 1 {
            *out.entry(mask.count_ones() as usize).or_insert(0) += 1;
        }
    }
    out
}

/// Alternating permutations `p0 < p1 > p2 < ...` of `n` elements, checked
/// one permutation at a time.
pub fn alternating_permutations(n: usize) -> u64 {
    fn permute(items: &mut Vec<usize>, k: usize, count: &mut u64) {
        if k == items.len() {
            let ok = items
                .windows(2)
                .enumerate()
                .all(|(i, w)| if i % 2 == 0 { w[0] < w[1] } else { w[0] > w[1] });
            *count += u64::from(ok);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            permute(items, k + 1, count);
            items.swap(k, i);
        }
    }
    let mut count = 0;
    permute(&mut (0..n).collect(), 0, &mut count);
    count
}
