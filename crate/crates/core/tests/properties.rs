use proptest::prelude::*;
use syzygy::field::{Field, PrimeField, Rationals};
use syzygy::groebner::buchberger;
use syzygy::linalg::SparseMatrix;
use syzygy::poly::{monomials_of_degree, Monomial, PolyRing, Polynomial};

fn small_prime() -> PrimeField {
    PrimeField::new(101).unwrap()
}

fn form<F: Field>(ring: &PolyRing<F>, degree: u32, coeffs: &[i64]) -> Polynomial<F::Elem> {
    let f = ring.field();
    let terms: Vec<(Monomial, F::Elem)> = monomials_of_degree(ring.nvars(), degree)
        .into_iter()
        .zip(coeffs.iter().cycle())
        .map(|(m, c)| (m, f.from_i64(*c)))
        .collect();
    ring.from_terms(terms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rank_is_transpose_invariant(entries in prop::collection::vec(-3i64..=3, 20)) {
        let f = small_prime();
        let dense: Vec<Vec<_>> = entries.chunks(5).map(|r| r.iter().map(|&v| f.from_i64(v)).collect()).collect();
        let m = SparseMatrix::from_dense(f, &dense, 5).unwrap();
        prop_assert_eq!(m.rank(), m.transpose().rank());
        let (rank, kernel) = m.rank_kernel();
        prop_assert_eq!(rank + kernel.len(), 5);
        for v in &kernel {
            prop_assert!(m.mul_dense(v).unwrap().iter().all(|x| f.is_zero(x)));
        }
    }

    #[test]
    fn rational_rank_bounds_prime_rank(entries in prop::collection::vec(-9i64..=9, 16)) {
        let q = Rationals;
        let p = small_prime();
        let dq: Vec<Vec<_>> = entries.chunks(4).map(|r| r.iter().map(|&v| q.from_i64(v)).collect()).collect();
        let dp: Vec<Vec<_>> = entries.chunks(4).map(|r| r.iter().map(|&v| p.from_i64(v)).collect()).collect();
        let rq = SparseMatrix::from_dense(q, &dq, 4).unwrap().rank();
        let rp = SparseMatrix::from_dense(p, &dp, 4).unwrap().rank();
        prop_assert!(rp <= rq);
    }

    #[test]
    fn ring_operations_are_consistent(a in prop::collection::vec(-5i64..=5, 6), b in prop::collection::vec(-5i64..=5, 6)) {
        let ring = PolyRing::grevlex(small_prime(), 3);
        let x = form(&ring, 2, &a);
        let y = form(&ring, 1, &b);
        prop_assert_eq!(ring.mul(&x, &y), ring.mul(&y, &x));
        let sum = ring.add(&x, &y);
        prop_assert_eq!(ring.sub(&sum, &y), x.clone());
        let text = ring.format(&x);
        prop_assert_eq!(ring.parse(&text).unwrap(), x);
    }

    #[test]
    fn groebner_bases_are_closed(a in prop::collection::vec(-4i64..=4, 6), b in prop::collection::vec(-4i64..=4, 6)) {
        let ring = PolyRing::grevlex(small_prime(), 3);
        let gens = vec![form(&ring, 2, &a), form(&ring, 2, &b)];
        let gb = buchberger(&ring, &gens).unwrap();
        prop_assert!(gb.s_pairs_reduce_to_zero());
        prop_assert!(gb.is_auto_reduced());
        for g in &gens {
            prop_assert!(gb.contains(g));
        }
    }
}
