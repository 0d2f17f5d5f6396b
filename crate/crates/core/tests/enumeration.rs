//! Three independent routes to every semi-biproduct over small X and B must
//! give the same pseudo-actions: brute force over the pseudo-action arrays,
//! completion of every `X -> A -> B` with |A| <= |X||B|, and the relation
//! scheme.

use std::collections::BTreeSet;
use std::sync::Arc;

use sbp_core::algebra::{enumerate_homs, enumerate_monoid_tables, FiniteMonoid};
use sbp_core::equivalence::extract;
use sbp_core::pseudoaction::{verify_pseudo_action, PseudoAction};
use sbp_core::search::{complete_extension, enumerate_semibiproducts, DEFAULT_SEED_BUDGET};
use sbp_core::semibiproduct::SemiBiproduct;
use sbp_core::Execution;

type Key = (Vec<usize>, Vec<usize>, Vec<usize>);

fn key(pa: &PseudoAction) -> Key {
    (pa.rho().to_vec(), pa.phi().to_vec(), pa.gamma().to_vec())
}

fn monoids(sizes: std::ops::RangeInclusive<usize>) -> Vec<Arc<FiniteMonoid>> {
    sizes
        .flat_map(|n| enumerate_monoid_tables(n, Execution::Sequential))
        .map(Arc::new)
        .collect()
}

fn by_arrays(x: &Arc<FiniteMonoid>, b: &Arc<FiniteMonoid>) -> BTreeSet<Key> {
    let (nx, nb) = (x.size(), b.size());
    let len = 2 * nx * nb + nb * nb;
    let mut out = BTreeSet::new();
    for mut code in 0..nx.pow(len as u32) {
        let mut v: Vec<usize> = (0..len)
            .map(|_| {
                let d = code % nx;
                code /= nx;
                d
            })
            .collect();
        let gamma = v.split_off(2 * nx * nb);
        let phi = v.split_off(nx * nb);
        let pa = PseudoAction::new(x.clone(), b.clone(), v, phi, gamma).unwrap();
        if verify_pseudo_action(&pa).ok {
            out.insert(key(&pa));
        }
    }
    out
}

fn by_completion(x: &Arc<FiniteMonoid>, b: &Arc<FiniteMonoid>, carriers: &[Arc<FiniteMonoid>]) -> BTreeSet<Key> {
    let mut out = BTreeSet::new();
    for a in carriers.iter().filter(|a| a.size() <= x.size() * b.size()) {
        let ps: Vec<_> = enumerate_homs(a, b, Execution::Sequential)
            .into_iter()
            .filter(|p| p.is_surjective())
            .collect();
        if ps.is_empty() {
            continue;
        }
        for k in enumerate_homs(x, a, Execution::Sequential)
            .into_iter()
            .filter(|k| k.is_injective())
        {
            // k is always the kernel of p in a semi-biproduct
            for p in ps.iter().filter(|p| k.image() == p.preimage_of_identity()) {
                for (q, s) in complete_extension(&k, p, Execution::Sequential).unwrap() {
                    let d = SemiBiproduct::new(p.clone(), k.clone(), q, s).unwrap();
                    assert!(d.is_verified());
                    out.insert(key(&extract(&d).unwrap()));
                }
            }
        }
    }
    out
}

fn by_scheme(x: &Arc<FiniteMonoid>, b: &Arc<FiniteMonoid>) -> BTreeSet<Key> {
    let e = enumerate_semibiproducts(x, b, DEFAULT_SEED_BUDGET, Execution::default());
    assert!(e.complete);
    e.diagrams.iter().map(|d| key(&extract(d).unwrap())).collect()
}

#[test]
fn three_routes_agree_up_to_size_two() {
    let small = monoids(1..=2);
    let carriers = monoids(1..=4);
    let mut total = 0;
    for x in &small {
        for b in &small {
            let arrays = by_arrays(x, b);
            assert!(!arrays.is_empty(), "the trivial action always exists");
            assert_eq!(
                by_completion(x, b, &carriers),
                arrays,
                "completion, |X|={} |B|={}",
                x.size(),
                b.size()
            );
            assert_eq!(by_scheme(x, b), arrays, "scheme, |X|={} |B|={}", x.size(), b.size());
            total += arrays.len();
        }
    }
    // sanity: the trivial cases contribute one each
    assert!(total >= small.len() * small.len());
}
