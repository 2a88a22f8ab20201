mod common;

use common::*;
use operad_core::axioms::verify_axioms;
use operad_core::builders::{build_as, build_com, build_d, phi, AugmentedAlgebra};
use operad_core::truncatify::{is_truncatified, poisson_check, truncatify, Grading, TruncatifiedOperad};
use operad_core::{Element, Permutation, TruncatedOperad, Q};

fn trc_as(n: usize) -> TruncatifiedOperad {
    truncatify(&build_as(n).unwrap()).unwrap()
}

/// Closure of `gens ∪ {1}` under partial composition and the symmetric
/// groups, by brute force over dense spans.
fn generated_dims(p: &TruncatedOperad, gens: &[Element]) -> Vec<usize> {
    let n_max = p.horizon();
    let mut spans: Vec<Vec<Vec<Q>>> = vec![Vec::new(); n_max + 1];
    let add = |spans: &mut Vec<Vec<Vec<Q>>>, x: &Element| -> bool {
        if x.is_zero() {
            return false;
        }
        let s = &mut spans[x.arity];
        s.push(x.coords.clone());
        if rank(s) == s.len() {
            true
        } else {
            s.pop();
            false
        }
    };
    add(&mut spans, &p.unit());
    for g in gens {
        add(&mut spans, g);
    }
    loop {
        let mut grew = false;
        let snapshot = spans.clone();
        for m in 1..=n_max {
            for x in &snapshot[m] {
                let xe = Element { arity: m, coords: x.clone() };
                for k in 1..m {
                    let y = p.act(&xe, &Permutation::transposition(m, k).unwrap()).unwrap();
                    grew |= add(&mut spans, &y);
                }
                for n in 1..=n_max + 1 - m {
                    for y in &snapshot[n] {
                        let ye = Element { arity: n, coords: y.clone() };
                        for i in 1..=m {
                            grew |= add(&mut spans, &p.partial_compose(&xe, i, &ye).unwrap());
                        }
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }
    spans.iter().map(Vec::len).collect()
}

#[test]
fn trc_as_dims_and_grading() {
    let t = trc_as(4);
    assert_eq!(t.operad.dims(), vec![1, 1, 2, 6, 24]);
    let r = is_truncatified(&t).unwrap();
    assert!(r.passed(), "{:?}", r.failures);
    let ax = verify_axioms(&t.operad);
    assert!(ax.passed(), "{:?}", &ax.violations[..ax.violations.len().min(3)]);
    // piece i of arity n has dim f(i)·C(n,i), f = derangements
    let f = derangements(4);
    for n in 0..=4 {
        let pieces = t.grading.piece_dims(n);
        for i in 0..=n {
            let f_i = if i == 0 { 1 } else { f[i] };
            assert_eq!(pieces[i], f_i * binom(n, i), "n={n} i={i}");
        }
    }
    let top: Vec<usize> = (0..=4).map(|n| t.grading.piece_dims(n)[n]).collect();
    assert_eq!(top, vec![1, 0, 1, 2, 9]);
}

#[test]
fn truncatify_is_idempotent() {
    for p in [build_as(4).unwrap(), build_d(&AugmentedAlgebra::random(2, 0), 5).unwrap()] {
        let t = truncatify(&p).unwrap();
        let tt = truncatify(&t.operad).unwrap();
        assert_eq!(tt.operad.dims(), t.operad.dims());
        for n in 0..=p.horizon() {
            assert_eq!(tt.grading.piece_dims(n), t.grading.piece_dims(n), "{} n={n}", p.name());
        }
        assert!(is_truncatified(&tt).unwrap().passed());
    }
}

#[test]
fn trc_of_com_is_com() {
    let t = truncatify(&build_com(5).unwrap()).unwrap();
    assert_eq!(t.operad.dims(), vec![1; 6]);
    assert!(t.grading.degrees.iter().all(|d| d.iter().all(|&g| g == 0)));
    assert!(is_truncatified(&t).unwrap().passed());
}

#[test]
fn graded_d_is_already_truncatified() {
    let p = build_d(&AugmentedAlgebra::random(3, 0), 5).unwrap();
    // 1_n in degree 0, every δ in degree 1
    let degrees = (0..=5).map(|n| (0..p.dim(n)).map(|b| usize::from(b > 0)).collect()).collect();
    let t = TruncatifiedOperad::with_grading(p, Grading { degrees }).unwrap();
    let r = is_truncatified(&t).unwrap();
    assert!(r.passed(), "{:?}", r.failures);
    assert!(t.symbol(0, &t.operad.unit()).is_err());
}

#[test]
fn as_with_a_flat_grading_is_not_truncatified() {
    let p = build_as(3).unwrap();
    let degrees = (0..=3).map(|n| vec![0; p.dim(n)]).collect();
    let t = TruncatifiedOperad::with_grading(p.clone(), Grading { degrees }).unwrap();
    let r = is_truncatified(&t).unwrap();
    assert!(!r.ladder_matches);
    assert!(!r.passed());
    assert!(!r.failures.is_empty());
    // wrong shape
    assert!(TruncatifiedOperad::with_grading(p, Grading { degrees: vec![vec![0]] }).is_err());
}

#[test]
fn poisson_relations_hold_directly() {
    let t = trc_as(4);
    let a = build_as(4).unwrap();
    let one2 = t.symbol(0, &a.basis_element(2, 0).unwrap()).unwrap();
    let bracket = t.symbol(2, &phi(&a, 2).unwrap()).unwrap();
    let p = &t.operad;
    let swap = Permutation::transposition(2, 1).unwrap();
    let s213 = Permutation::from_seq(vec![2, 1, 3]).unwrap();
    assert!(!one2.is_zero() && !bracket.is_zero());
    assert_eq!(p.act(&one2, &swap).unwrap(), one2);
    assert_eq!(p.act(&bracket, &swap).unwrap(), bracket.scale(&-one()));

    let c = |x: &Element, i: usize, y: &Element| p.partial_compose(x, i, y).unwrap();
    let plus = |x: &Element, y: &Element| x.add(y).unwrap();
    // associativity of the product
    assert_eq!(c(&one2, 1, &one2), c(&one2, 2, &one2));
    // Leibniz rule
    let rhs = plus(&c(&one2, 2, &bracket), &p.act(&c(&one2, 2, &bracket), &s213).unwrap());
    assert_eq!(c(&bracket, 1, &one2), rhs);
    // Jacobi identity
    let rhs = plus(&c(&bracket, 1, &bracket), &p.act(&c(&bracket, 2, &bracket), &s213).unwrap());
    assert_eq!(c(&bracket, 2, &bracket), rhs);
    // units
    let z = p.zero_unit().unwrap();
    for i in 1..=2 {
        assert_eq!(c(&one2, i, &z), p.unit());
        assert!(c(&bracket, i, &z).is_zero());
    }
}

#[test]
fn poisson_report_and_generation_gap() {
    let t = trc_as(4);
    let r = poisson_check(&t).unwrap();
    assert!(r.symmetric_product && r.antisymmetric_bracket);
    assert!(r.associativity && r.leibniz && r.jacobi && r.unit_actions);
    assert_eq!(r.top_degree_dims, vec![1, 0, 1, 2, 9]);
    // the two classes generate only part of arity 4 (products of brackets
    // fall into a vanishing degree); independently recomputed here
    let a = build_as(4).unwrap();
    let one2 = t.symbol(0, &a.basis_element(2, 0).unwrap()).unwrap();
    let bracket = t.symbol(2, &phi(&a, 2).unwrap()).unwrap();
    let dims = generated_dims(&t.operad, &[one2, bracket]);
    assert_eq!(dims[1..], r.generated_dims[1..]);
    assert_eq!(dims[1..4], [1, 2, 6]);
    assert!(dims[4] < 24);
    assert_eq!(r.generation, dims[4] == 24);
    assert!(!r.passed());

    assert!(poisson_check(&truncatify(&build_com(4).unwrap()).unwrap()).is_err());
    assert!(poisson_check(&trc_as(2)).is_err());
}

#[test]
fn generation_holds_in_low_arity() {
    let t = trc_as(3);
    let r = poisson_check(&t).unwrap();
    assert!(r.passed(), "{r:?}");
    assert_eq!(r.generated_dims[1..], [1, 2, 6]);
}
