use std::collections::BTreeSet;

use spdbound::polytope::*;

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Tree-partition counts from the recursion "a set is a leaf, or splits into ≥ 2 parts
/// each carrying its own family"; `comp` selects ordered interval splits.
fn tree_count_oracle(n: usize, comp: bool, perfect: bool) -> u64 {
    let mut f = vec![0u64; n + 1];
    // p[m]: sum over all splits of an m-set (including the one-part split) of Π f
    let mut p = vec![0u64; n + 1];
    p[0] = 1;
    for m in 1..=n {
        let mut rest = 0;
        for k in 1..m {
            let ways = if comp { 1 } else { binom(m as u64 - 1, k as u64 - 1) };
            rest += ways * f[k] * p[m - k];
        }
        f[m] = if m == 1 { 1 } else { rest + u64::from(!perfect) };
        p[m] = f[m] + rest;
    }
    f[n]
}

/// Planar trees with `leaves` leaves and `k` internal vertices.
fn kirkman_cayley(leaves: u64, k: u64) -> u64 {
    binom(leaves - 2, k - 1) * binom(leaves + k - 1, k - 1) / k
}

#[test]
fn tree_partition_counts_match_recursion() {
    for n in 1..=7 {
        assert_eq!(enumerate_tree_partitions(n, false, false).unwrap().len() as u64, tree_count_oracle(n, false, false));
    }
    for n in 1..=9 {
        assert_eq!(enumerate_tree_partitions(n, true, false).unwrap().len() as u64, tree_count_oracle(n, true, false));
    }
}

#[test]
fn associahedron_faces_are_planar_trees() {
    let schroeder = [1, 1, 3, 11, 45, 197];
    for n in 1..=6 {
        let perfect = enumerate_tree_partitions(n, true, true).unwrap();
        assert_eq!(perfect.len() as u64, schroeder[n - 1]);
        assert_eq!(perfect.len() as u64, tree_count_oracle(n, true, true));
        if n >= 2 {
            let f = weyl_face_lattice(n, WeylKind::Ass).unwrap().f_vector();
            for (d, &count) in f.iter().enumerate() {
                let internal = (n - 1 - d) as u64;
                assert_eq!(count as u64, kirkman_cayley(n as u64, internal), "n={n} d={d}");
            }
        }
    }
}

/// Chains of strict refinements from the one-block partition, by brute force over
/// restricted growth strings.
fn leveled_count_oracle(n: usize, segmental: bool) -> usize {
    fn partitions(n: usize) -> Vec<Vec<usize>> {
        let mut out = vec![];
        let mut a = vec![0usize; n];
        fn rec(i: usize, max: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if i == a.len() {
                out.push(a.clone());
                return;
            }
            for v in 0..=max + 1 {
                a[i] = v;
                rec(i + 1, max.max(v), a, out);
            }
        }
        if n > 0 {
            rec(1, 0, &mut a, &mut out);
        }
        out
    }
    let all: Vec<Vec<usize>> = partitions(n)
        .into_iter()
        .filter(|a| !segmental || a.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1))
        .collect();
    // q refines p: equal labels in q imply equal labels in p
    let refines = |q: &Vec<usize>, p: &Vec<usize>| (0..n).all(|i| (0..n).all(|j| q[i] != q[j] || p[i] == p[j]));
    fn chains(p: &Vec<usize>, all: &[Vec<usize>], refines: &dyn Fn(&Vec<usize>, &Vec<usize>) -> bool) -> usize {
        1 + all.iter().filter(|q| *q != p && refines(q, p)).map(|q| chains(q, all, refines)).sum::<usize>()
    }
    chains(&vec![0; n], &all, &refines)
}

#[test]
fn leveled_counts_match_brute_force() {
    for n in 1..=5 {
        assert_eq!(enumerate_leveled(n, false).unwrap().len(), leveled_count_oracle(n, false), "n={n}");
        assert_eq!(enumerate_leveled(n, true).unwrap().len(), leveled_count_oracle(n, true), "n={n}");
    }
}

/// Dimension as a sum over factors: a joint ray per refinement step, a point at the end.
#[test]
fn karp_dimension_factorwise() {
    for n in 1..=6 {
        for a in enumerate_leveled(n, false).unwrap() {
            let sizes: Vec<usize> = a.levels.iter().map(|p| p.blocks.len()).collect();
            let rays: usize = sizes.windows(2).map(|w| w[1] - w[0] - 1).sum();
            let point = n - sizes.last().unwrap();
            assert_eq!(stratum_karp(&a).dim, rays + point, "{a}");
        }
    }
}

#[test]
fn karp_to_pass_is_onto() {
    for n in 1..=5 {
        for seg in [true, false] {
            let image: BTreeSet<String> =
                enumerate_leveled(n, seg).unwrap().iter().map(|a| karp_to_pass(a).to_string()).collect();
            let trees: BTreeSet<String> =
                enumerate_tree_partitions(n, seg, false).unwrap().iter().map(|t| t.to_string()).collect();
            assert_eq!(image, trees, "n={n} segmental={seg}");
        }
    }
}

fn check_partial_order<T>(items: &[T], leq: impl Fn(&T, &T) -> bool, dim: impl Fn(&T) -> usize) {
    for a in items {
        assert!(leq(a, a));
        for b in items {
            let ab = leq(a, b);
            if ab && leq(b, a) {
                assert!(std::ptr::eq(a, b), "antisymmetry");
            }
            if ab && !std::ptr::eq(a, b) {
                assert!(dim(b) < dim(a), "closure must drop dimension");
                for c in items {
                    if leq(b, c) {
                        assert!(leq(a, c), "transitivity");
                    }
                }
            }
        }
    }
}

#[test]
fn closure_orders_are_partial_orders() {
    for n in 1..=4 {
        let trees = enumerate_tree_partitions(n, false, false).unwrap();
        check_partial_order(&trees, pass_closure_leq, |t| stratum_pass(t).dim);
        let top = trees.iter().filter(|t| stratum_pass(t).dim == n - 1).count();
        assert_eq!(top, 1);
        let lev = enumerate_leveled(n, false).unwrap();
        check_partial_order(&lev, karp_closure_leq, |a| stratum_karp(a).dim);
    }
}

#[test]
fn chamber_lattices() {
    let karp = weyl_face_lattice(4, WeylKind::Karp).unwrap();
    assert_eq!(karp.f_vector(), vec![6, 12, 7, 1]);
    assert_eq!(karp.nodes.len(), 26);
    for n in 2..=6 {
        let l = weyl_face_lattice(n, WeylKind::Karp).unwrap();
        assert_eq!(l.alternating_sum(), 0, "n={n}");
        assert_eq!(l.f_vector().last(), Some(&1));
        // the Pass lattice is the nodewise image and is never larger
        let p = weyl_face_lattice(n, WeylKind::Pass).unwrap();
        assert!(p.nodes.len() <= l.nodes.len());
    }
    let pass = weyl_face_lattice(4, WeylKind::Pass).unwrap();
    assert_eq!(karp.nodes.len() - pass.nodes.len(), 2);
}

#[test]
fn guards() {
    assert!(matches!(enumerate_tree_partitions(8, false, false), Err(spdbound::Error::TooLarge { .. })));
    assert!(matches!(enumerate_tree_partitions(10, true, false), Err(spdbound::Error::TooLarge { .. })));
    assert!(matches!(enumerate_leveled(8, true), Err(spdbound::Error::TooLarge { .. })));
}
