use proptest::prelude::*;
use slitkit::{Symbol, Tableau, TableauPermutation};

fn all_images(s: usize) -> Vec<Vec<usize>> {
    if s == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in all_images(s - 1) {
        for pos in 0..=rest.len() {
            let mut v = rest.clone();
            v.insert(pos, s - 1);
            out.push(v);
        }
    }
    out
}

// cycle count by walking orbits, independent of the library
fn orbits(images: &[usize]) -> usize {
    let mut seen = vec![false; images.len()];
    let mut c = 0;
    for x in 0..images.len() {
        if !seen[x] {
            c += 1;
            let mut y = x;
            while !seen[y] {
                seen[y] = true;
                y = images[y];
            }
        }
    }
    c
}

// word length in transpositions by sorting with swaps
fn swap_distance(images: &[usize]) -> usize {
    let mut v = images.to_vec();
    let mut swaps = 0;
    for i in 0..v.len() {
        while v[i] != i {
            let j = v[i];
            v.swap(i, j);
            swaps += 1;
        }
    }
    swaps
}

fn perms_on(t: &Tableau) -> Vec<TableauPermutation> {
    all_images(t.symbol_count())
        .iter()
        .map(|v| TableauPermutation::from_images(t, v).unwrap())
        .collect()
}

#[test]
fn group_laws_on_small_tableaux() {
    for widths in [vec![2], vec![3], vec![1, 1], vec![0, 2]] {
        let t = Tableau::new(&widths).unwrap();
        let all = perms_on(&t);
        assert_eq!(all.len(), (1..=t.symbol_count()).product::<usize>());
        let id = TableauPermutation::identity(&t);
        for a in &all {
            assert_eq!(&a.compose(&id).unwrap(), a);
            assert_eq!(&id.compose(a).unwrap(), a);
            assert!(a.compose(&a.inverse()).unwrap().is_identity());
            let imgs: Vec<usize> = a.images().iter().map(|&x| x as usize).collect();
            assert_eq!(a.cycle_count(), orbits(&imgs));
            assert_eq!(a.norm(), swap_distance(&imgs));
            assert_eq!(a.norm(), a.inverse().norm());
            for b in &all {
                let ab = a.compose(b).unwrap();
                for x in 0..t.symbol_count() {
                    assert_eq!(ab.apply(x), a.apply(b.apply(x)));
                }
                assert!(ab.norm() <= a.norm() + b.norm());
                // the parity of the norm is a homomorphism
                assert_eq!(ab.norm() % 2, (a.norm() + b.norm()) % 2);
            }
        }
        for a in all.iter().take(6) {
            for b in all.iter().skip(3).take(6) {
                for c in all.iter().skip(7).take(6) {
                    let left = a.compose(b).unwrap().compose(c).unwrap();
                    let right = a.compose(&b.compose(c).unwrap()).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }
}

#[test]
fn norm_counts_follow_stirling_numbers() {
    // unsigned Stirling numbers of the first kind c(5, k)
    let t = Tableau::single(4);
    let mut by_cycles = [0usize; 6];
    for a in perms_on(&t) {
        by_cycles[a.cycle_count()] += 1;
    }
    assert_eq!(by_cycles, [0, 24, 50, 35, 10, 1]);
}

#[test]
fn layer_cycles_are_the_forced_bottom_row() {
    let t = Tableau::new(&[2, 0, 1]).unwrap();
    let s = TableauPermutation::layer_cycles(&t);
    assert_eq!(s.to_string(), "(1.0,1.1,1.2)(2.0)(3.0,3.1)");
    assert_eq!(s.cycle_count(), 3);
    assert_eq!(
        s.apply_symbol(Symbol::new(1, 2)),
        Some(Symbol::new(1, 0))
    );
}

#[test]
fn deletion_skips_the_symbol() {
    let t = Tableau::single(3);
    let s = TableauPermutation::parse_on(&t, "(0,2,1,3)").unwrap();
    assert_eq!(s.delete(1, 2).unwrap().to_string(), "(0,1,2)");
    assert_eq!(s.delete(1, 0).unwrap().to_string(), "(0,2,1)");
    let u = TableauPermutation::parse("(0,2,3)(1)").unwrap();
    assert_eq!(u.delete(1, 1).unwrap().to_string(), "(0,1,2)");
    assert!(s.delete(2, 0).is_err());
}

#[test]
fn parse_rejects_garbage() {
    assert!(TableauPermutation::parse("(0,1").is_err());
    assert!(TableauPermutation::parse("(0,0)(1)").is_err());
    assert!(TableauPermutation::parse("(0,2)").is_err());
    assert!(TableauPermutation::parse("").is_err());
}

fn arb_perm() -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    prop::collection::vec(0usize..4, 1..4).prop_flat_map(|widths| {
        let s: usize = widths.iter().map(|p| p + 1).sum();
        (Just(widths), Just((0..s).collect::<Vec<_>>()).prop_shuffle())
    })
}

fn arb_triple() -> impl Strategy<Value = (Vec<usize>, Vec<usize>, Vec<usize>, Vec<usize>)> {
    prop::collection::vec(0usize..4, 1..4).prop_flat_map(|widths| {
        let s: usize = widths.iter().map(|p| p + 1).sum();
        let shuffled = || Just((0..s).collect::<Vec<_>>()).prop_shuffle();
        (Just(widths), shuffled(), shuffled(), shuffled())
    })
}

proptest! {
    #[test]
    fn text_round_trip((widths, images) in arb_perm()) {
        let t = Tableau::new(&widths).unwrap();
        let a = TableauPermutation::from_images(&t, &images).unwrap();
        let text = a.to_string();
        let b = TableauPermutation::parse_on(&t, &text).unwrap();
        prop_assert_eq!(&a, &b);
        let c: TableauPermutation = text.parse().unwrap();
        prop_assert_eq!(c, a);
    }

    #[test]
    fn deletion_is_a_permutation((widths, images) in arb_perm(), pick in 0usize..64) {
        let t = Tableau::new(&widths).unwrap();
        let a = TableauPermutation::from_images(&t, &images).unwrap();
        let layers: Vec<usize> = (1..=widths.len()).filter(|&i| widths[i - 1] >= 1).collect();
        prop_assume!(!layers.is_empty());
        let layer = layers[pick % layers.len()];
        let j = pick % (widths[layer - 1] + 1);
        let d = a.delete(layer, j).unwrap();
        prop_assert_eq!(d.tableau().symbol_count(), t.symbol_count() - 1);
        // deleting a fixed point keeps every other cycle
        if a.apply(t.offset(layer) + j) == t.offset(layer) + j {
            prop_assert_eq!(d.cycle_count() + 1, a.cycle_count());
        } else {
            prop_assert_eq!(d.cycle_count(), a.cycle_count());
        }
    }

    #[test]
    fn distance_is_a_metric((widths, x, y, z) in arb_triple()) {
        let t = Tableau::new(&widths).unwrap();
        let a = TableauPermutation::from_images(&t, &x).unwrap();
        let b = TableauPermutation::from_images(&t, &y).unwrap();
        let c = TableauPermutation::from_images(&t, &z).unwrap();
        let d = |u: &TableauPermutation, v: &TableauPermutation| u.compose(&v.inverse()).unwrap().norm();
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
        prop_assert_eq!(d(&a, &a), 0);
    }
}
