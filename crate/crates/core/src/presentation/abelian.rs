//! Abelianization `Z^r ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k` from the Smith normal form of
//! the relator exponent matrix.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{GroupPresentation, Word};
use crate::algebra::field::FieldElement;
use crate::algebra::integer::{smith_normal_form, IntegerMatrix};

/// Coordinates are ordered free first, then torsion with `d_1 | d_2 | ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Abelianization {
    pub ngens: usize,
    pub free_rank: usize,
    /// Invariant factors, each at least 2, forming a divisibility chain.
    pub torsion: Vec<BigInt>,
    /// Row `j` is the image of generator `j`, torsion entries reduced.
    pub projection: IntegerMatrix,
    /// Row `i` holds generator exponents of a word mapping to basis vector `i`.
    pub lifts: IntegerMatrix,
}

pub fn abelianize(p: &GroupPresentation) -> Abelianization {
    let n = p.ngens();
    let rows: Vec<Vec<BigInt>> = p
        .relators()
        .iter()
        .map(|r| r.exponent_sums(n).into_iter().map(BigInt::from).collect())
        .collect();
    let m = IntegerMatrix::from_rows(n, rows);
    let snf = smith_normal_form(&m);
    let diag = |i: usize| -> BigInt {
        if i < snf.d.rows().min(n) {
            snf.d.get(i, i).clone()
        } else {
            BigInt::zero()
        }
    };
    let free: Vec<usize> = (0..n).filter(|&i| diag(i).is_zero()).collect();
    let tors: Vec<usize> = (0..n)
        .filter(|&i| !diag(i).is_zero() && !diag(i).is_one())
        .collect();
    let coords: Vec<usize> = free.iter().chain(tors.iter()).copied().collect();
    let moduli: Vec<BigInt> = coords.iter().map(|&i| diag(i)).collect();

    let mut projection = IntegerMatrix::zeros(n, coords.len());
    for j in 0..n {
        for (c, &i) in coords.iter().enumerate() {
            let mut x = snf.v.get(j, i).clone();
            if !moduli[c].is_zero() {
                x = x.mod_floor(&moduli[c]);
            }
            projection.set(j, c, x);
        }
    }
    let mut lifts = IntegerMatrix::zeros(coords.len(), n);
    for (c, &i) in coords.iter().enumerate() {
        for j in 0..n {
            lifts.set(c, j, snf.v_inv.get(i, j).clone());
        }
    }
    // orient each free coordinate so its first nonzero generator image is positive
    for c in 0..free.len() {
        let flip = (0..n)
            .map(|j| projection.get(j, c).clone())
            .find(|x| !x.is_zero())
            .is_some_and(|x| x.is_negative());
        if flip {
            for j in 0..n {
                let x = -projection.get(j, c).clone();
                projection.set(j, c, x);
                let y = -lifts.get(c, j).clone();
                lifts.set(c, j, y);
            }
        }
    }
    Abelianization {
        ngens: n,
        free_rank: free.len(),
        torsion: tors.iter().map(|&i| diag(i)).collect(),
        projection,
        lifts,
    }
}

impl Abelianization {
    pub fn ncoords(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// `0` for free coordinates, `d_i` for torsion ones.
    pub fn moduli(&self) -> Vec<BigInt> {
        std::iter::repeat_n(BigInt::zero(), self.free_rank)
            .chain(self.torsion.iter().cloned())
            .collect()
    }

    /// Reduces a coordinate vector modulo the torsion orders.
    pub fn normalize(&self, v: &[BigInt]) -> Vec<BigInt> {
        v.iter()
            .zip(self.moduli())
            .map(|(x, m)| if m.is_zero() { x.clone() } else { x.mod_floor(&m) })
            .collect()
    }

    pub fn project_exponents(&self, e: &[i64]) -> Vec<BigInt> {
        let raw: Vec<BigInt> = (0..self.ncoords())
            .map(|c| {
                (0..self.ngens)
                    .map(|j| self.projection.get(j, c) * BigInt::from(e[j]))
                    .sum()
            })
            .collect();
        self.normalize(&raw)
    }

    pub fn project_word(&self, w: &Word) -> Vec<BigInt> {
        self.project_exponents(&w.exponent_sums(self.ngens))
    }

    /// A word mapping to basis vector `i`.
    pub fn basis_lift(&self, i: usize) -> Word {
        let mut w = Word::identity();
        for j in 0..self.ngens {
            let k = self.lifts.get(i, j).to_i64().expect("small exponent");
            w = w.mul(&Word::gen_pow(j, k));
        }
        w
    }

    /// Values on the basis vectors of a character given on generators.
    pub fn coordinate_values(&self, images: &[FieldElement]) -> Vec<FieldElement> {
        (0..self.ncoords())
            .map(|i| {
                (0..self.ngens).fold(images[0].field().one(), |acc, j| {
                    acc * images[j].pow(self.lifts.get(i, j).to_i64().expect("small exponent"))
                })
            })
            .collect()
    }

    /// Generator images of the character taking the given basis values.
    pub fn generator_images(&self, coords: &[FieldElement]) -> Vec<FieldElement> {
        let field = coords
            .first()
            .map(|c| c.field().clone())
            .expect("at least one coordinate");
        (0..self.ngens)
            .map(|j| {
                (0..self.ncoords()).fold(field.one(), |acc, c| {
                    let e = self.projection.get(j, c);
                    acc * coords[c].pow(e.to_i64().expect("small exponent"))
                })
            })
            .collect()
    }

    /// Whether the group is finite.
    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |a, d| a * d)
    }

    /// Exponent of the torsion subgroup (the last invariant factor, or 1).
    pub fn torsion_exponent(&self) -> BigInt {
        self.torsion.last().cloned().unwrap_or_else(BigInt::one)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bs12_is_z() {
        let p = GroupPresentation::parse("gens a t\nrel t a t^-1 a^-2").unwrap();
        let ab = abelianize(&p);
        assert_eq!(ab.free_rank, 1);
        assert!(ab.torsion.is_empty());
        assert_eq!(ab.project_word(&Word::gen_pow(0, 1)), vec![BigInt::zero()]);
        assert_eq!(ab.project_word(&Word::gen_pow(1, 1)), vec![BigInt::one()]);
    }

    #[test]
    fn free_group_is_z2() {
        let ab = abelianize(&GroupPresentation::free_group(&["a", "b"]));
        assert_eq!(ab.free_rank, 2);
        assert!(ab.torsion.is_empty());
    }

    #[test]
    fn orbifold_1_22() {
        let p = GroupPresentation::parse("gens a b x y\nrel x^2\nrel y^2\nrel [a,b] x y").unwrap();
        let ab = abelianize(&p);
        assert_eq!(ab.free_rank, 2);
        assert_eq!(ab.torsion, vec![BigInt::from(2)]);
        for r in p.relators() {
            assert!(ab.project_word(r).iter().all(|x| x.is_zero()));
        }
        for i in 0..ab.ncoords() {
            let mut e = vec![BigInt::zero(); ab.ncoords()];
            e[i] = BigInt::one();
            assert_eq!(ab.project_word(&ab.basis_lift(i)), e);
        }
    }
}
