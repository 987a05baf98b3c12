//! Worked examples, each checked against a small brute-force computation
//! written independently of the library.

use std::collections::BTreeSet;

use cetcs::axioms::{self, check_pi_universal, Axiom, Scope, Theorem};
use cetcs::finset::{
    self, all_maps, coequalizer, equalizer, exponential, nno_prefix, pi_diagram, product,
    pullback, quotient, sum, FinMor, FinObj, FinSet,
};
use cetcs::kernel::{self, Element};
use cetcs::logic::{self, parse, Context, Signature};
use cetcs::relcalc::{self, atomic_relation, reindex, Atomic, Reindex, Relation, Subobject};

fn obj(labels: &[&str]) -> FinObj {
    FinObj::new(labels.iter().copied()).unwrap()
}

fn map(dom: &FinObj, cod: &FinObj, table: &[usize]) -> FinMor {
    FinMor::new(dom.clone(), cod.clone(), table.to_vec()).unwrap()
}

/// Number of equivalence classes of the closure of `pairs` on `0..n`,
/// by repeated relabelling until stable.
fn closure_classes(n: usize, pairs: &[(usize, usize)]) -> usize {
    let mut class: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        for &(a, b) in pairs {
            let (ca, cb) = (class[a], class[b]);
            if ca != cb {
                let (lo, hi) = (ca.min(cb), ca.max(cb));
                for c in class.iter_mut() {
                    if *c == hi {
                        *c = lo;
                    }
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    class.iter().collect::<BTreeSet<_>>().len()
}

/// Raw tables of every map between sizes, by counting in base `cod`.
fn raw_tables(dom: usize, cod: usize) -> Vec<Vec<usize>> {
    let total = (cod as u64).pow(dom as u32);
    (0..total)
        .map(|mut k| {
            let mut t = vec![0; dom];
            for slot in t.iter_mut().rev() {
                *slot = (k % cod as u64) as usize;
                k /= cod as u64;
            }
            t
        })
        .collect()
}

#[test]
fn elements_of_three_in_label_order() {
    let a = obj(&["a", "b", "c"]);
    let els = kernel::elements(&FinSet::default(), &a);
    let points: Vec<usize> = els.iter().map(|e| e.mor().point().unwrap()).collect();
    assert_eq!(points, raw_tables(1, 3).into_iter().map(|t| t[0]).collect::<Vec<_>>());
    assert_eq!(points, vec![0, 1, 2]);
}

#[test]
fn inclusion_is_mono_against_all_test_pairs() {
    let a = obj(&["a"]);
    let ab = obj(&["a", "b"]);
    let inc = map(&a, &ab, &[0]);
    assert!(kernel::is_mono(&FinSet::default(), &inc));
    for n in 0..=2 {
        for h in raw_tables(n, 1) {
            for k in raw_tables(n, 1) {
                let hh: Vec<usize> = h.iter().map(|&i| inc.table()[i]).collect();
                let kk: Vec<usize> = k.iter().map(|&i| inc.table()[i]).collect();
                assert!(hh != kk || h == k);
            }
        }
    }
    let constant = map(&ab, &FinObj::standard(1), &[0, 0]);
    assert!(!kernel::is_mono(&FinSet::default(), &constant));
}

#[test]
fn two_constants_are_not_jointly_monic() {
    let two = FinObj::standard(2);
    let x = FinObj::standard(3);
    let c0 = FinMor::constant(&two, &x, 0);
    let c1 = FinMor::constant(&two, &x, 1);
    let legs = [c0.clone(), c1.clone()];
    assert!(!kernel::jointly_monic(&FinSet::default(), &legs).unwrap());
    // The two elements of the apex are a distinct pair equalized by both.
    let (f, g) = (FinMor::element(&two, 0), FinMor::element(&two, 1));
    assert_ne!(f, g);
    assert_eq!(c0.after(&f).unwrap(), c0.after(&g).unwrap());
    assert_eq!(c1.after(&f).unwrap(), c1.after(&g).unwrap());
    assert!(relcalc::make_relation(legs.to_vec()).is_err());
}

#[test]
fn membership_in_an_inclusion() {
    let x = obj(&["x0", "x1", "x2"]);
    let m = FinObj::standard(2);
    let inc = map(&m, &x, &[0, 1]);
    let cat = FinSet::default();
    for i in 0..3 {
        let xs = [Element(FinMor::element(&x, i))];
        let found = (0..2).any(|a| inc.table()[a] == i);
        assert_eq!(kernel::member(&cat, &xs, &m, std::slice::from_ref(&inc)).unwrap(), found);
    }
    let empty = Relation::new(finset::initial(), vec![finset::from_initial(&x)]).unwrap();
    assert!(!empty.contains(&[0]));
}

#[test]
fn pairing_of_elements_is_unique() {
    let a = obj(&["a0", "a1"]);
    let b = obj(&["b0", "b1", "b2"]);
    let p = product(&a, &b);
    assert_eq!(p.apex.len(), 6);
    let one = finset::terminal();
    for i in 0..2 {
        for j in 0..3 {
            let x = FinMor::element(&a, i);
            let y = FinMor::element(&b, j);
            let paired = p.pair(&one, &[x.clone(), y.clone()]).unwrap();
            let candidates: Vec<FinMor> = all_maps(&one, &p.apex)
                .filter(|h| p.projections[0].after(h).unwrap() == x && p.projections[1].after(h).unwrap() == y)
                .collect();
            assert_eq!(candidates, vec![paired.clone()]);
            assert_eq!(p.apex.label(paired.point().unwrap()), format!("(a{i},b{j})"));
        }
    }
}

#[test]
fn equalizer_filters_agreement() {
    let a = obj(&["a", "b"]);
    let two = FinObj::standard(2);
    let f = map(&a, &two, &[0, 1]);
    let g = map(&a, &two, &[0, 0]);
    let e = equalizer(&f, &g).unwrap();
    let agree: Vec<usize> = (0..2).filter(|&i| f.table()[i] == g.table()[i]).collect();
    assert_eq!(e.table(), agree.as_slice());
    assert_eq!(e.dom().labels(), ["a"]);
    let h = map(&a, &two, &[1, 0]);
    assert!(equalizer(&f, &h).unwrap().dom().is_empty());
}

#[test]
fn sum_injections_partition_the_apex() {
    let a = FinObj::standard(2);
    let b = FinObj::standard(3);
    let s = sum(&a, &b);
    assert_eq!(s.apex.len(), 5);
    for z in 0..5 {
        let in_l = s.inl.table().contains(&z);
        let in_r = s.inr.table().contains(&z);
        assert!(in_l ^ in_r);
    }
    let one = finset::terminal();
    let two = sum(&one, &one);
    assert_ne!(two.inl, two.inr);
}

#[test]
fn coequalizers_match_closure() {
    let one = obj(&["a"]);
    let two = FinObj::standard(2);
    let q = coequalizer(&map(&one, &two, &[0]), &map(&one, &two, &[1])).unwrap();
    assert_eq!(q.cod().len(), closure_classes(2, &[(0, 1)]));
    assert_eq!(q.cod().len(), 1);

    let a = FinObj::standard(2);
    let four = FinObj::standard(4);
    let f = map(&a, &four, &[0, 2]);
    let g = map(&a, &four, &[1, 3]);
    let q = coequalizer(&f, &g).unwrap();
    assert_eq!(q.cod().len(), closure_classes(4, &[(0, 1), (2, 3)]));
    assert_eq!(q.cod().len(), 2);
}

#[test]
fn pullback_filters_pairs() {
    let ab = obj(&["a", "b"]);
    let c = obj(&["c"]);
    let two = FinObj::standard(2);
    let f = map(&ab, &two, &[0, 1]);
    let g = map(&c, &two, &[0]);
    let pb = pullback(&f, &g).unwrap();
    let expected: Vec<(usize, usize)> = (0..2)
        .flat_map(|x| (0..1).map(move |y| (x, y)))
        .filter(|&(x, y)| f.table()[x] == g.table()[y])
        .collect();
    assert_eq!(expected, vec![(0, 0)]);
    assert_eq!(pb.apex.labels(), ["(a,c)"]);
}

fn section_count(g: &FinMor, f: &FinMor) -> usize {
    (0..f.cod().len())
        .map(|i| {
            (0..f.dom().len())
                .filter(|&x| f.table()[x] == i)
                .map(|x| (0..g.dom().len()).filter(|&y| g.table()[y] == x).count())
                .product::<usize>()
        })
        .sum()
}

#[test]
fn pi_diagram_examples() {
    let y = obj(&["y0", "y1", "y2"]);
    let x = obj(&["x0", "x1"]);
    let i = obj(&["i0"]);
    let g = map(&y, &x, &[0, 0, 1]);
    let f = map(&x, &i, &[0, 0]);
    let d = pi_diagram(&g, &f).unwrap();
    assert_eq!(d.params.len(), 2);
    assert_eq!(section_count(&g, &f), 2);
    assert!(check_pi_universal(&d, &g, &f).unwrap().passed());

    // An empty fiber over x inside a nonempty f-fiber kills that index.
    let g = map(&FinObj::standard(1), &x, &[0]);
    let d = pi_diagram(&g, &f).unwrap();
    assert_eq!(d.params.len(), 0);

    // f the identity: each index x contributes |g⁻¹(x)| sections.
    let g = map(&y, &x, &[0, 0, 1]);
    let id = FinMor::identity(&x);
    let d = pi_diagram(&g, &id).unwrap();
    assert_eq!(d.params.len(), 3);
    assert_eq!(section_count(&g, &id), y.len());
}

#[test]
fn pi_section_counts_and_universality_over_all_small_pairs() {
    for ny in 0..=3 {
        for nx in 0..=3 {
            for ni in 0..=3 {
                let (y, x, i) = (FinObj::standard(ny), FinObj::standard(nx), FinObj::standard(ni));
                for g in all_maps(&y, &x) {
                    for f in all_maps(&x, &i) {
                        let d = pi_diagram(&g, &f).unwrap();
                        assert_eq!(d.params.len(), section_count(&g, &f));
                        assert!(check_pi_universal(&d, &g, &f).unwrap().passed());
                    }
                }
            }
        }
    }
}

#[test]
fn pi_inflated_parameters_are_duplicates() {
    let y = FinObj::standard(2);
    let x = FinObj::standard(1);
    let i = FinObj::standard(1);
    let g = map(&y, &x, &[0, 0]);
    let f = map(&x, &i, &[0]);
    let d = pi_diagram(&g, &f).unwrap();
    // Duplicate the first parameter: P' = P + one more point over it.
    let n = d.params.len();
    let params = FinObj::standard(n + 1);
    let orig = |v: usize| if v == n { 0 } else { v };
    let phi = FinMor::from_fn(params.clone(), i.clone(), |v| d.phi.apply(orig(v)));
    let sq = pullback(&phi, &f).unwrap();
    let ev = FinMor::from_fn(sq.apex.clone(), y.clone(), |t| {
        let (v, x0) = (orig(sq.pi1.apply(t)), sq.pi2.apply(t));
        let q = (0..d.apex.len()).find(|&q| d.pi1.apply(q) == v && d.pi2.apply(q) == x0).unwrap();
        d.ev.apply(q)
    });
    let big = finset::PiDiagram { apex: sq.apex, params, pi1: sq.pi1, pi2: sq.pi2, phi, ev };
    let r = check_pi_universal(&big, &g, &f).unwrap();
    assert!(!r.passed());
    assert!(r.witness.unwrap().get("duplicate v").is_some());
}

#[test]
fn quotient_by_generated_equivalence() {
    let x = FinObj::standard(3);
    let pairs = [(0, 0), (1, 1), (2, 2), (0, 1), (1, 0)];
    let r = Relation::from_tuples(vec![x.clone(), x.clone()], pairs.iter().map(|&(a, b)| vec![a, b]).collect()).unwrap();
    let q = quotient(&r).unwrap();
    assert_eq!(q.cod().len(), closure_classes(3, &[(0, 1)]));
    assert_eq!(q.cod().len(), 2);
    let not_equiv = Relation::from_tuples(vec![x.clone(), x], vec![vec![0, 1]]).unwrap();
    assert!(quotient(&not_equiv).is_err());
}

#[test]
fn exponential_counts_tables() {
    let x = FinObj::standard(2);
    let y = FinObj::standard(3);
    let e = exponential(&x, &y);
    assert_eq!(e.obj.len(), raw_tables(2, 3).len());
    for t in raw_tables(2, 3) {
        let f = map(&x, &y, &t);
        let s = e.name_of(&f).unwrap();
        for a in 0..2 {
            assert_eq!(relcalc::apply(&e.eval, &[s, a]).unwrap(), t[a]);
        }
    }
    assert_eq!(exponential(&finset::initial(), &y).obj.len(), 1);
    assert_eq!(exponential(&y, &finset::terminal()).obj.len(), 1);
}

#[test]
fn recursion_prefix_unrolls() {
    let a = FinObj::standard(3);
    let b = FinMor::element(&a, 0);
    let h = FinMor::from_fn(a.clone(), a.clone(), |i| (i + 1) % 3);
    let seq = nno_prefix(5, &b, &h).unwrap();
    let mut expected = vec![0usize];
    for _ in 0..5 {
        let last = *expected.last().unwrap();
        expected.push((last + 1) % 3);
    }
    let pts: Vec<usize> = seq.iter().map(|e| e.point().unwrap()).collect();
    assert_eq!(pts, expected);
    assert_eq!(pts, vec![0, 1, 2, 0, 1, 2]);
}

#[test]
fn projective_covers_split_every_onto_map() {
    for n in 0..=3 {
        let a = FinObj::standard(n);
        let p = finset::projective_cover(&a);
        assert_eq!(p, FinMor::identity(&a));
        for nb in 0..=3 {
            let b = FinObj::standard(nb);
            for t in raw_tables(nb, n) {
                let onto = (0..n).all(|j| t.contains(&j));
                if !onto {
                    continue;
                }
                let found = raw_tables(n, nb).into_iter().any(|s| (0..n).all(|j| t[s[j]] == j));
                assert!(found);
                let g = map(&b, &a, &t);
                assert!(all_maps(&a, &b).any(|s| g.after(&s).unwrap() == FinMor::identity(&a)));
            }
        }
    }
}

#[test]
fn relation_calculus_examples() {
    let x = obj(&["x0", "x1", "x2"]);
    let sub = |members: &[usize]| {
        Subobject::from_relation(Relation::from_tuples(vec![x.clone()], members.iter().map(|&m| vec![m]).collect()).unwrap()).unwrap()
    };
    let (small, big) = (sub(&[0]), sub(&[0, 1]));
    assert!(relcalc::subseteq(&small, &big).unwrap());
    let f = relcalc::leq(&small, &big).unwrap().unwrap();
    assert_eq!(big.mono().after(&f).unwrap(), *small.mono());
    assert!(relcalc::leq(&big, &small).unwrap().is_none());

    let y = obj(&["y0", "y1"]);
    let two_out = Relation::from_tuples(vec![x.clone(), y.clone()], vec![vec![0, 0], vec![0, 1]]).unwrap();
    assert!(!relcalc::is_partial_function(&two_out).unwrap());
    let x2 = obj(&["x0", "x1"]);
    let one_pair = Relation::from_tuples(vec![x2, y.clone()], vec![vec![0, 0]]).unwrap();
    assert!(relcalc::is_partial_function(&one_pair).unwrap());
    assert!(!relcalc::is_total_function(&one_pair).unwrap());

    let graph = Relation::from_tuples(vec![x.clone(), y.clone()], vec![vec![0, 0], vec![1, 1], vec![2, 0]]).unwrap();
    assert_eq!(relcalc::unique_choice(&graph).unwrap().table(), [0, 1, 0]);

    let swapped = reindex(&two_out, &Reindex::Permute(vec![1, 0])).unwrap();
    for a in 0..3 {
        for b in 0..2 {
            assert_eq!(swapped.contains(&[b, a]), two_out.contains(&[a, b]));
        }
    }

    let g = map(&x, &y, &[0, 1, 0]);
    let h = map(&x, &y, &[0, 0, 0]);
    let eq = atomic_relation(Atomic::Equalizer(&g, &h)).unwrap();
    let agree: BTreeSet<Vec<usize>> = (0..3).filter(|&i| g.table()[i] == h.table()[i]).map(|i| vec![i]).collect();
    assert_eq!(eq.members(), agree);
    assert_eq!(atomic_relation(Atomic::True(&x)).unwrap().members().len(), 3);
    assert!(atomic_relation(Atomic::False(&x)).unwrap().members().is_empty());
}

fn compile_fixture() -> (Signature, Context) {
    let mut sig = Signature::new();
    let x = obj(&["x0", "x1", "x2"]);
    let y = obj(&["y0", "y1"]);
    sig.add_object("X", x.clone());
    sig.add_object("Y", y.clone());
    sig.add_relation("r", &["X"], Relation::from_tuples(vec![x.clone()], vec![vec![0], vec![1]]).unwrap()).unwrap();
    sig.add_relation("s", &["X"], Relation::from_tuples(vec![x.clone()], vec![vec![1], vec![2]]).unwrap()).unwrap();
    sig.add_relation("m", &["X", "Y"], Relation::from_tuples(vec![x, y], vec![vec![0, 0], vec![0, 1]]).unwrap())
        .unwrap();
    let ctx = Context::from_vars(&sig, &[("x", "X")]).unwrap();
    (sig, ctx)
}

#[test]
fn compiled_members_match_truth_tables() {
    let (sig, ctx) = compile_fixture();
    let r = [true, true, false];
    let s = [false, true, true];
    let m = |x: usize, y: usize| x == 0 && y < 2;
    let cases: Vec<(&str, Vec<bool>)> = vec![
        ("r(x) /\\ s(x)", (0..3).map(|i| r[i] && s[i]).collect()),
        ("r(x) \\/ s(x)", (0..3).map(|i| r[i] || s[i]).collect()),
        ("r(x) => s(x)", (0..3).map(|i| !r[i] || s[i]).collect()),
        ("forall y:Y. m(x,y)", (0..3).map(|i| (0..2).all(|j| m(i, j))).collect()),
        ("exists y:Y. m(x,y)", (0..3).map(|i| (0..2).any(|j| m(i, j))).collect()),
        ("~~r(x)", r.to_vec()),
    ];
    for (text, table) in cases {
        let phi = parse(&sig, &ctx, text).unwrap();
        let res = logic::compile(&sig, &ctx, &phi).unwrap();
        let got: Vec<bool> = (0..3).map(|i| res.relation.contains(&[i])).collect();
        assert_eq!(got, table, "{text}");
        assert!(logic::verify(&sig, &ctx, &phi).unwrap().passed());
    }
}

#[test]
fn nested_quantifiers_match_hand_enumeration() {
    let mut sig = Signature::new();
    let two = FinObj::standard(2);
    sig.add_object("A", two.clone());
    let pairs = [[0, 1], [1, 1]];
    let rel = Relation::from_tuples(vec![two.clone(), two], pairs.iter().map(|p| p.to_vec()).collect()).unwrap();
    sig.add_relation("q", &["A", "A"], rel).unwrap();
    let ctx = Context::new();
    let q = |a: usize, b: usize| pairs.contains(&[a, b]);
    let cases = [
        ("forall a:A. exists b:A. q(a,b)", (0..2).all(|a| (0..2).any(|b| q(a, b)))),
        ("exists b:A. forall a:A. q(a,b)", (0..2).any(|b| (0..2).all(|a| q(a, b)))),
        ("forall a:A. forall b:A. q(a,b)", false),
        ("exists a:A. ~(exists b:A. q(b,a))", (0..2).any(|a| !(0..2).any(|b| q(b, a)))),
    ];
    for (text, truth) in cases {
        let phi = parse(&sig, &ctx, text).unwrap();
        assert_eq!(logic::oracle(&sig, &ctx, &phi, &[]).unwrap(), truth, "{text}");
        assert_eq!(logic::compile(&sig, &ctx, &phi).unwrap().relation.contains(&[]), truth, "{text}");
    }
}

#[test]
fn axiom_g_at_bound_three() {
    let spec = axioms::CheckSpec { item: "G".into(), scope: Scope::new(3).unwrap() };
    let r = axioms::check_axiom(&spec).unwrap();
    assert!(r.passed());
    // Onto monos between carriers ≤ 3 are the bijections: 1 + 1 + 2 + 6.
    assert_eq!(r.instances_checked, 10);
    assert_eq!(axioms::run_axiom(Axiom::I, &Scope::new(1).unwrap()).instances_checked, 1);
}

#[test]
fn inclusion_at_bound_four_and_balance_at_three() {
    let r = axioms::run_theorem(Theorem::Inclusion, &Scope::new(4).unwrap());
    assert!(r.passed(), "{r}");
    let monos: usize = (0..=4usize)
        .map(|n| (0..=n).map(|m| (n - m + 1..=n).product::<usize>()).sum::<usize>().pow(2))
        .sum();
    assert_eq!(r.instances_checked as usize, monos);
    assert!(axioms::run_theorem(Theorem::Balance, &Scope::new(3).unwrap()).passed());
}

#[test]
fn dependent_choice_on_successor_or_stay() {
    let x = FinObj::standard(3);
    let tuples: Vec<Vec<usize>> = (0..3).flat_map(|a| [vec![a, a], vec![a, (a + 1).min(2)]]).collect::<BTreeSet<_>>().into_iter().collect();
    let r = Relation::from_tuples(vec![x.clone(), x.clone()], tuples.clone()).unwrap();
    let sigma = all_maps(&x, r.apex()).find(|s| r.legs()[0].after(s).unwrap() == FinMor::identity(&x)).unwrap();
    let g = r.legs()[1].after(&sigma).unwrap();
    for start in 0..3 {
        let chain = nno_prefix(4, &FinMor::element(&x, start), &g).unwrap();
        let pts: Vec<usize> = chain.iter().map(|e| e.point().unwrap()).collect();
        assert_eq!(pts[0], start);
        for w in pts.windows(2) {
            assert!(tuples.contains(&vec![w[0], w[1]]));
        }
    }
    assert!(axioms::run_theorem(Theorem::DependentChoice, &Scope::new(3).unwrap()).passed());
}
