use std::collections::BTreeSet;
use std::sync::Arc;

use cauchyden::contexts::monoids_of_order;
use cauchyden::fincat::{monoid_homs, Monoid, MonoidHom};

/// Every permutation of `0..n` fixing 0.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            go(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut (1..n).collect(), &mut vec![0], &mut out);
    out
}

/// Smallest relabelling of a table with unit 0.
fn canonical(n: usize, table: &[usize], perms: &[Vec<usize>]) -> Vec<usize> {
    perms
        .iter()
        .map(|p| {
            let mut t = vec![0; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[p[a] * n + p[b]] = p[table[a * n + b]];
                }
            }
            t
        })
        .min()
        .expect("identity permutation")
}

/// Isomorphism classes of monoids of order `n`, by brute force over tables
/// with unit 0.
fn brute_force(n: usize) -> BTreeSet<Vec<usize>> {
    let perms = permutations(n);
    let free = (n - 1) * (n - 1);
    let mut classes = BTreeSet::new();
    let mut table = vec![0; n * n];
    for k in 0..n.pow(free as u32) {
        let mut code = k;
        for a in 0..n {
            for b in 0..n {
                table[a * n + b] = if a == 0 {
                    b
                } else if b == 0 {
                    a
                } else {
                    let v = code % n;
                    code /= n;
                    v
                };
            }
        }
        let assoc = (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| table[table[a * n + b] * n + c] == table[a * n + table[b * n + c]]))
        });
        if assoc {
            classes.insert(canonical(n, &table, &perms));
        }
    }
    classes
}

fn catalog_classes(n: usize) -> BTreeSet<Vec<usize>> {
    let perms = permutations(n);
    monoids_of_order(n)
        .iter()
        .map(|m| {
            m.validate().unwrap();
            // move the unit to 0 first
            let u = m.unit();
            let swap = |x: usize| if x == u { 0 } else if x == 0 { u } else { x };
            let mut t = vec![0; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[swap(a) * n + swap(b)] = swap(m.mul(a, b));
                }
            }
            canonical(n, &t, &perms)
        })
        .collect()
}

#[test]
fn catalog_matches_brute_force() {
    for n in 1..=4 {
        let brute = brute_force(n);
        let catalog = catalog_classes(n);
        assert_eq!(catalog.len(), monoids_of_order(n).len(), "duplicate classes of order {n}");
        assert_eq!(catalog, brute, "order {n}");
    }
}

#[test]
fn catalog_sizes() {
    let sizes: Vec<usize> = (1..=6).map(|n| monoids_of_order(n).len()).collect();
    assert_eq!(sizes, [1, 2, 7, 35, 228, 2237]);
    assert_eq!(catalog_classes(5).len(), 228);
}

#[test]
fn hom_enumeration_matches_brute_force() {
    let small: Vec<&Monoid> = (1..=3).flat_map(|n| monoids_of_order(n).iter()).collect();
    for a in &small {
        for b in &small {
            let (n, m) = (a.len(), b.len());
            let mut brute = Vec::new();
            for k in 0..m.pow(n as u32) {
                let map: Vec<usize> = (0..n).map(|i| k / m.pow(i as u32) % m).collect();
                if MonoidHom::new(Arc::new((*a).clone()), Arc::new((*b).clone()), map.clone()).is_ok() {
                    brute.push(map);
                }
            }
            let mut listed = monoid_homs(a, b);
            listed.sort();
            brute.sort();
            assert_eq!(listed, brute);
        }
    }
}
