//! Finite-dimensional Lie algebras given by structure constants, together
//! with a realization of each generator as a polynomial vector field on the
//! coordinate algebra.
//!
//! Validation checks antisymmetry, the Jacobi identity and that the
//! realization respects brackets; all three run at load time.

use crate::poly::Poly;
use crate::series::Rat;
use num::Zero;

#[derive(Clone, Debug)]
pub struct LieAlgebra {
    names: Vec<String>,
    /// structure[i][j][k] is the coefficient of X_k in [X_i, X_j].
    structure: Vec<Vec<Vec<Rat>>>,
    /// realization[g][c] is the coefficient polynomial of d/dx_c in the
    /// vector field realizing X_g (in the n coordinate variables).
    realization: Vec<Vec<Poly>>,
    n_coords: usize,
    trunc: usize,
}

impl LieAlgebra {
    pub fn new(
        names: Vec<String>,
        structure: Vec<Vec<Vec<Rat>>>,
        realization: Vec<Vec<Poly>>,
        n_coords: usize,
        trunc: usize,
    ) -> Result<Self, crate::Error> {
        let dim = names.len();
        if structure.len() != dim || structure.iter().any(|r| r.len() != dim) {
            return Err(crate::Error::Validation(
                "structure constant table has wrong shape".into(),
            ));
        }
        if structure
            .iter()
            .any(|r| r.iter().any(|row| row.len() != dim))
        {
            return Err(crate::Error::Validation(
                "structure constant rows must have one entry per generator".into(),
            ));
        }
        if realization.len() != dim || realization.iter().any(|r| r.len() != n_coords) {
            return Err(crate::Error::Validation(
                "realization must give one polynomial per generator per coordinate".into(),
            ));
        }
        let lie = LieAlgebra {
            names,
            structure,
            realization,
            n_coords,
            trunc,
        };
        lie.validate()?;
        Ok(lie)
    }

    fn validate(&self) -> Result<(), crate::Error> {
        let d = self.dim();
        // Antisymmetry.
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    if self.structure[i][j][k] != -&self.structure[j][i][k] {
                        return Err(crate::Error::Validation(format!(
                            "structure constants not antisymmetric at ({}, {}, {})",
                            self.names[i], self.names[j], self.names[k]
                        )));
                    }
                }
            }
        }
        // Jacobi: [[Xi,Xj],Xk] + [[Xj,Xk],Xi] + [[Xk,Xi],Xj] = 0.
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let mut acc = Rat::zero();
                        for m in 0..d {
                            acc += &self.structure[i][j][m] * &self.structure[m][k][l];
                            acc += &self.structure[j][k][m] * &self.structure[m][i][l];
                            acc += &self.structure[k][i][m] * &self.structure[m][j][l];
                        }
                        if !acc.is_zero() {
                            return Err(crate::Error::Validation(format!(
                                "Jacobi identity fails on ({}, {}, {})",
                                self.names[i], self.names[j], self.names[k]
                            )));
                        }
                    }
                }
            }
        }
        // Realization respects brackets: [rho(Xi), rho(Xj)] = rho([Xi, Xj]).
        for i in 0..d {
            for j in 0..d {
                let lhs = self.field_commutator(i, j);
                for c in 0..self.n_coords {
                    let mut rhs = Poly::zero(self.n_coords, self.trunc);
                    for k in 0..d {
                        rhs = rhs.add(&self.realization[k][c].scale_rat(&self.structure[i][j][k]));
                    }
                    if lhs[c] != rhs {
                        return Err(crate::Error::Validation(format!(
                            "realization does not respect the bracket [{}, {}]",
                            self.names[i], self.names[j]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Commutator of the realized vector fields of generators i and j,
    /// returned per coordinate.
    fn field_commutator(&self, i: usize, j: usize) -> Vec<Poly> {
        let xi = &self.realization[i];
        let xj = &self.realization[j];
        (0..self.n_coords)
            .map(|c| {
                let mut acc = Poly::zero(self.n_coords, self.trunc);
                for b in 0..self.n_coords {
                    acc = acc.add(&xi[b].mul(&xj[c].diff(b)));
                    acc = acc.sub(&xj[b].mul(&xi[c].diff(b)));
                }
                acc
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn n_coords(&self) -> usize {
        self.n_coords
    }

    pub fn trunc_order(&self) -> usize {
        self.trunc
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Bracket coefficient c such that [X_i, X_j] = sum_k c_{ij}^k X_k.
    pub fn bracket_coeff(&self, i: usize, j: usize, k: usize) -> &Rat {
        &self.structure[i][j][k]
    }

    /// True when all generators in `support` commute pairwise.
    pub fn is_abelian_support(&self, support: &[usize]) -> bool {
        support.iter().all(|&i| {
            support
                .iter()
                .all(|&j| self.structure[i][j].iter().all(|c| c.is_zero()))
        })
    }

    /// Realized vector field coefficient of d/dx_c for generator g.
    pub fn field(&self, g: usize, c: usize) -> &Poly {
        &self.realization[g][c]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    pub(crate) fn abelian2() -> LieAlgebra {
        // Two commuting translation fields on R^2.
        let zero3 = vec![vec![vec![Rat::zero(); 2]; 2]; 2];
        let one = |c: usize| {
            let mut r = vec![Poly::zero(2, 1), Poly::zero(2, 1)];
            r[c] = Poly::one(2, 1);
            r
        };
        LieAlgebra::new(
            vec!["D1".into(), "D2".into()],
            zero3,
            vec![one(0), one(1)],
            2,
            1,
        )
        .unwrap()
    }

    #[test]
    fn abelian_loads() {
        let lie = abelian2();
        assert_eq!(lie.dim(), 2);
        assert!(lie.is_abelian_support(&[0, 1]));
    }

    #[test]
    fn jordanian_bracket_realization() {
        // H = x d/dx, E = d/dx, [H, E] = -E.
        let mut s = vec![vec![vec![Rat::zero(); 2]; 2]; 2];
        s[0][1][1] = rat(-1);
        s[1][0][1] = rat(1);
        let lie = LieAlgebra::new(
            vec!["H".into(), "E".into()],
            s,
            vec![vec![Poly::var(0, 1, 2)], vec![Poly::one(1, 2)]],
            1,
            2,
        );
        assert!(lie.is_ok());
    }

    #[test]
    fn broken_jacobi_rejected() {
        // dim 3 with [X1,X2]=X3, [X1,X3]=X2, [X2,X3]=X1 violates Jacobi? It does not;
        // instead use a deliberately inconsistent table: [X1,X2]=X1, [X2,X3]=X2, [X3,X1]=X3.
        let mut s = vec![vec![vec![Rat::zero(); 3]; 3]; 3];
        let pairs = [(0usize, 1usize, 0usize), (1, 2, 1), (2, 0, 2)];
        for (i, j, k) in pairs {
            s[i][j][k] = rat(1);
            s[j][i][k] = rat(-1);
        }
        let zero_real = vec![vec![Poly::zero(1, 1)]; 3];
        let err = LieAlgebra::new(
            vec!["X1".into(), "X2".into(), "X3".into()],
            s,
            zero_real,
            1,
            1,
        )
        .unwrap_err();
        let msg = format!("{}", err);
        assert!(msg.contains("Jacobi"), "unexpected error: {}", msg);
    }

    #[test]
    fn bad_realization_rejected() {
        // Claim [H,E] = -E but realize both as d/dx (which commute).
        let mut s = vec![vec![vec![Rat::zero(); 2]; 2]; 2];
        s[0][1][1] = rat(-1);
        s[1][0][1] = rat(1);
        let err = LieAlgebra::new(
            vec!["H".into(), "E".into()],
            s,
            vec![vec![Poly::one(1, 1)], vec![Poly::one(1, 1)]],
            1,
            1,
        )
        .unwrap_err();
        assert!(format!("{}", err).contains("realization"));
    }
}
