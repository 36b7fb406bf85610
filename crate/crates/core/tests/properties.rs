use proptest::prelude::*;

use fibperm_core::bijections::{phi, phi_inverse, rho, rho_inverse};
use fibperm_core::classes::{compose, count, decompose, generate, ClassId};
use fibperm_core::fib::{fib_stat, Tile, Tiling};
use fibperm_core::genfun::{genfun_oracle, genfun_recurrence};
use fibperm_core::perm::{avoids_all, inversions, Permutation};
use fibperm_core::stats::{distribution_formula, Stat, Tabulation, Variant};
use fibperm_core::Error;

fn class() -> impl Strategy<Value = ClassId> {
    prop::sample::select(ClassId::ALL.to_vec())
}

fn tiling(max_cells: usize) -> impl Strategy<Value = Tiling> {
    prop::collection::vec(prop::bool::ANY, 1..=max_cells).prop_map(|bits| {
        Tiling::new(
            bits.into_iter()
                .map(|d| if d { Tile::Domino } else { Tile::Monomino })
                .collect(),
        )
    })
}

/// A random member of the class with length in `1..=max_len`.
fn member(max_len: usize) -> impl Strategy<Value = (ClassId, Permutation)> {
    (class(), 1..=max_len, any::<prop::sample::Index>()).prop_map(|(c, n, i)| {
        let all = generate(c, n).unwrap();
        let p = i.get(&all).clone();
        (c, p)
    })
}

proptest! {
    #[test]
    fn members_avoid_their_patterns((c, p) in member(14)) {
        prop_assert!(avoids_all(&p, &c.patterns()));
    }

    #[test]
    fn decompose_compose_round_trip((c, p) in member(16)) {
        let d = decompose(c, &p).unwrap();
        prop_assert_eq!(compose(c, &d).unwrap(), p);
    }

    #[test]
    fn bijection_round_trip((c, p) in member(16)) {
        if c.is_a() {
            let t = phi(c, &p).unwrap();
            prop_assert_eq!(t.cells(), p.len() + 1);
            prop_assert_eq!(phi_inverse(c, &t).unwrap(), p);
        } else {
            let t = rho(c, &p).unwrap();
            prop_assert_eq!(t.cells(), p.len() + 1);
            prop_assert_eq!(rho_inverse(c, &t).unwrap(), p);
        }
    }

    #[test]
    fn tilings_invert_or_are_excluded(c in class(), t in tiling(16)) {
        let back = if c.is_a() { phi_inverse(c, &t) } else { rho_inverse(c, &t) };
        match back {
            Ok(p) => {
                prop_assert_eq!(p.len() + 1, t.cells());
                let again = if c.is_a() { phi(c, &p) } else { rho(c, &p) };
                prop_assert_eq!(again.unwrap(), t);
            }
            Err(Error::ExcludedTiling(_)) => {
                let tiles = t.tiles();
                let excluded = if c.is_a() {
                    tiles[0] == Tile::Domino && tiles[1..].iter().all(|&x| x == Tile::Monomino)
                } else {
                    tiles.iter().all(|&x| x == Tile::Monomino)
                };
                prop_assert!(excluded);
            }
            Err(e) => prop_assert!(false, "unexpected {e:?}"),
        }
    }

    #[test]
    fn fib_stat_never_lands_next_to_n((_, p) in member(16)) {
        let n = p.len();
        let k = fib_stat(&p);
        prop_assert!(k == n || k + 3 <= n, "{} has Fib {}", p, k);
        prop_assert!(inversions(&p) <= n * (n - 1) / 2);
    }
}

#[test]
fn formula_tabulations_sum_to_count() {
    for c in ClassId::ALL {
        for n in 1..=40 {
            let want = count(c, n).unwrap();
            for stat in [Stat::Inv, Stat::Fib, Stat::Joint] {
                let total = match distribution_formula(c, n, stat, Variant::Corrected) {
                    Tabulation::Single(d) => d.total(),
                    Tabulation::Joint(d) => d.total(),
                };
                assert_eq!(total, want, "{c} n={n} {stat:?}");
            }
        }
    }
}

#[test]
fn recurrence_matches_tabulation_beyond_the_acceptance_range() {
    for c in ClassId::ALL {
        for n in 13..=18 {
            assert_eq!(
                genfun_recurrence(c, n).unwrap(),
                genfun_oracle(c, n).unwrap(),
                "{c} n={n}"
            );
        }
    }
}
