//! Tiling bijections onto boards with one more cell than the permutation.
//!
//! * [`phi`] sends `Av_n(A1)` / `Av_n(A2)` onto the tilings of `n+1` cells
//!   other than `d m…m`.
//! * [`rho`] sends `Av_n(B1)` / `Av_n(B2)` onto the tilings of `n+1` cells
//!   other than `m…m`.

use crate::classes::{decompose, ClassId, Decomposition};
use crate::error::{Error, Result};
use crate::fib::{perm_to_tiling, tiling_values, Tile, Tiling};
use crate::perm::{standardize_distinct, Permutation};

fn require_a(class: ClassId) -> Result<()> {
    if class.is_a() {
        Ok(())
    } else {
        Err(Error::UnsupportedClass(class))
    }
}

fn require_b(class: ClassId) -> Result<()> {
    if class.is_a() {
        Err(Error::UnsupportedClass(class))
    } else {
        Ok(())
    }
}

/// Without a core: `m` then `Φ(perm)`. With a core: `d` then `Φ` of the
/// permutation left after deleting the smallest core value.
pub fn phi(class: ClassId, perm: &Permutation) -> Result<Tiling> {
    require_a(class)?;
    let Decomposition::A(d) = decompose(class, perm)? else {
        unreachable!("A-class decomposes to an A witness")
    };
    if !d.core_present {
        return Ok(perm_to_tiling(perm)?.prepend(Tile::Monomino));
    }
    let smallest = d.incr_len as u32 + 1;
    let rest: Vec<u32> = perm
        .values()
        .iter()
        .copied()
        .filter(|&v| v != smallest)
        .collect();
    let rest = standardize_distinct(&rest);
    Ok(perm_to_tiling(&rest)?.prepend(Tile::Domino))
}

/// Inverse of [`phi`].
pub fn phi_inverse(class: ClassId, tiling: &Tiling) -> Result<Permutation> {
    require_a(class)?;
    let excluded = || Error::ExcludedTiling(tiling.to_string());
    let (first, rest) = tiling.tiles().split_first().ok_or_else(excluded)?;
    match first {
        Tile::Monomino => Ok(Permutation::from_vec_unchecked(tiling_values(rest, 0))),
        Tile::Domino => {
            let core_at = rest
                .iter()
                .position(|&t| t == Tile::Domino)
                .ok_or_else(excluded)?;
            Ok(core_from_first_domino(class, rest, core_at))
        }
    }
}

/// `Φ⁻¹(tiles)` except that the domino at `core_at` becomes the class core
/// on three consecutive values.
fn core_from_first_domino(class: ClassId, tiles: &[Tile], core_at: usize) -> Permutation {
    let mut values = tiling_values(&tiles[..core_at], 0);
    let c = values.len() as u32;
    values.extend(match class {
        ClassId::A1 => [c + 3, c + 2, c + 1],
        _ => [c + 3, c + 1, c + 2],
    });
    values.extend(tiling_values(&tiles[core_at + 1..], c + 3));
    Permutation::from_vec_unchecked(values)
}

/// The entry 1 becomes a domino, each descent block after it a domino, and
/// every other entry a monomino.
pub fn rho(class: ClassId, perm: &Permutation) -> Result<Tiling> {
    require_b(class)?;
    if perm.is_empty() {
        return Err(Error::InvalidDecomposition(
            "rho needs a non-empty permutation".into(),
        ));
    }
    let Decomposition::B(d) = decompose(class, perm)? else {
        unreachable!("B-class decomposes to a B witness")
    };
    let mut tiles = vec![Tile::Monomino; d.pre_len - 1];
    tiles.push(Tile::Domino);
    tiles.extend_from_slice(perm_to_tiling(&d.sigma)?.tiles());
    Ok(Tiling::new(tiles))
}

/// Inverse of [`rho`].
pub fn rho_inverse(class: ClassId, tiling: &Tiling) -> Result<Permutation> {
    require_b(class)?;
    let tiles = tiling.tiles();
    let first_domino = tiles
        .iter()
        .position(|&t| t == Tile::Domino)
        .ok_or_else(|| Error::ExcludedTiling(tiling.to_string()))?;
    let k = first_domino as u32;
    let mut values: Vec<u32> = match class {
        ClassId::B1 => (2..=k + 1).rev().collect(),
        _ => (2..=k + 1).collect(),
    };
    values.push(1);
    values.extend(tiling_values(&tiles[first_domino + 1..], k + 1));
    Ok(Permutation::from_vec_unchecked(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::generate;
    use crate::fib::tilings;
    use std::collections::BTreeSet;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn t(s: &str) -> Tiling {
        s.parse().unwrap()
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(ClassId::A1, &p("214356")).unwrap(), t("mddmm"));
        assert_eq!(phi(ClassId::A1, &p("143265")).unwrap(), t("dmdd"));
        assert_eq!(phi(ClassId::A1, &p("1")).unwrap(), t("mm"));
        assert_eq!(
            phi(ClassId::A1, &p("231")),
            Err(Error::NotInClass(ClassId::A1))
        );
        assert_eq!(
            phi(ClassId::B1, &p("1")),
            Err(Error::UnsupportedClass(ClassId::B1))
        );
    }

    #[test]
    fn phi_inverse_examples() {
        assert_eq!(phi_inverse(ClassId::A1, &t("mddmm")).unwrap(), p("214356"));
        assert_eq!(phi_inverse(ClassId::A2, &t("dmdd")).unwrap(), p("142365"));
        assert_eq!(phi(ClassId::A2, &p("142365")).unwrap(), t("dmdd"));
        assert_eq!(
            phi_inverse(ClassId::A1, &t("dmmm")),
            Err(Error::ExcludedTiling("dmmm".into()))
        );
        assert!(matches!(
            phi_inverse(ClassId::A1, &Tiling::empty()),
            Err(Error::ExcludedTiling(_))
        ));
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(ClassId::B1, &p("3215467")).unwrap(), t("mmddmm"));
        assert_eq!(rho(ClassId::B1, &p("1235476")).unwrap(), t("dmmdd"));
        assert_eq!(rho(ClassId::B2, &p("231")).unwrap(), t("mmd"));
        assert_eq!(
            rho_inverse(ClassId::B1, &t("mmddmm")).unwrap(),
            p("3215467")
        );
        assert_eq!(rho_inverse(ClassId::B1, &t("mmd")).unwrap(), p("321"));
        assert_eq!(rho_inverse(ClassId::B2, &t("mmd")).unwrap(), p("231"));
        assert_eq!(
            rho_inverse(ClassId::B1, &t("mmmm")),
            Err(Error::ExcludedTiling("mmmm".into()))
        );
        assert_eq!(
            rho(ClassId::A1, &p("1")),
            Err(Error::UnsupportedClass(ClassId::A1))
        );
    }

    #[test]
    fn images_and_round_trips() {
        for n in 1..=9 {
            let mut excluded_phi = vec![Tile::Domino];
            excluded_phi.extend(std::iter::repeat_n(Tile::Monomino, n - 1));
            let excluded_phi = Tiling::new(excluded_phi);
            let excluded_rho = Tiling::new(vec![Tile::Monomino; n + 1]);
            for c in ClassId::ALL {
                let excluded = if c.is_a() {
                    &excluded_phi
                } else {
                    &excluded_rho
                };
                let expected: BTreeSet<Tiling> = tilings(n + 1)
                    .into_iter()
                    .filter(|x| x != excluded)
                    .collect();
                let members = generate(c, n).unwrap();
                let mut image = BTreeSet::new();
                for q in &members {
                    let (tl, back) = if c.is_a() {
                        let tl = phi(c, q).unwrap();
                        let back = phi_inverse(c, &tl).unwrap();
                        (tl, back)
                    } else {
                        let tl = rho(c, q).unwrap();
                        let back = rho_inverse(c, &tl).unwrap();
                        (tl, back)
                    };
                    assert_eq!(tl.cells(), n + 1);
                    assert_eq!(&back, q);
                    image.insert(tl);
                }
                assert_eq!(image.len(), members.len(), "{c} n={n} not injective");
                assert_eq!(image, expected, "{c} n={n}");
            }
        }
    }
}
