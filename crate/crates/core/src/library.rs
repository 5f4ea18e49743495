//! Named groups and complexes.

use crate::complex::TwoComplex;
use crate::error::{Error, Result};
use crate::flag::{glue_edge, FlagComplex};
use crate::presentation::Presentation;
use crate::subdivision::{barycentric_subdivision, to_simplicial};
use crate::word::{commutator, Letter, Word};

/// Anything the library can hand back.
#[derive(Clone, Debug)]
pub enum Builtin {
    Presentation(Presentation),
    Flag { complex: FlagComplex, bold_edge: Option<(String, String)> },
    Complex(TwoComplex),
}

pub const BUILTIN_NAMES: &[&str] = &["groupA", "groupBm", "groupQ", "complexKA", "complexF"];

pub fn builtin(name: &str, m: Option<usize>) -> Result<Builtin> {
    let need_m = || -> Result<usize> {
        match m {
            Some(m) if m >= 1 => Ok(m),
            _ => Err(Error::input(format!("{name} needs m >= 1"))),
        }
    };
    Ok(match name {
        "groupA" => Builtin::Presentation(group_a()),
        "groupBm" => Builtin::Presentation(group_bm(need_m()?)),
        "groupQ" => Builtin::Presentation(group_q(need_m()?)),
        "complexKA" => Builtin::Complex(complex_ka()),
        "complexF" => Builtin::Flag { complex: complex_f(), bold_edge: Some(("E".into(), "S".into())) },
        other => return Err(Error::input(format!("unknown builtin {other:?}; expected one of {BUILTIN_NAMES:?}"))),
    })
}

fn power(x: Letter, k: usize) -> Word {
    Word::new(vec![x; k])
}

/// Relators of A over letters `a`, `b`.
fn a_relators(a: Letter, b: Letter) -> Vec<Word> {
    let mut r1 = Word::new(vec![a]);
    for k in 1..=8 {
        r1 = r1.concat(&commutator(&power(b, k), &power(a, k)));
    }
    let mut r2 = Word::new(vec![b]);
    for k in 9..=11 {
        r2 = r2.concat(&commutator(&power(a, k), &power(b, k)));
    }
    vec![r1, r2]
}

/// ⟨a, b | a[b,a][b²,a²]…[b⁸,a⁸], b[a⁹,b⁹][a¹⁰,b¹⁰][a¹¹,b¹¹]⟩ with [x,y] = x⁻¹y⁻¹xy.
pub fn group_a() -> Presentation {
    Presentation::new(vec!["a".into(), "b".into()], a_relators(1, 2)).expect("A is well formed")
}

/// Relators `x_i⁻¹ x_{i−1} x_i x_{i−1}⁻²`, with `letter(i)` the letter of `x_i`.
fn bm_relators(m: usize, letter: impl Fn(usize) -> Letter) -> Vec<Word> {
    (1..=m)
        .map(|i| {
            let (xi, xp) = (letter(i), letter(i - 1));
            Word::new(vec![-xi, xp, xi, -xp, -xp])
        })
        .collect()
}

/// ⟨x₀, …, x_m | x_i⁻¹ x_{i−1} x_i = x_{i−1}²⟩.
pub fn group_bm(m: usize) -> Presentation {
    let names = (0..=m).map(|i| format!("x{i}")).collect();
    Presentation::new(names, bm_relators(m, |i| i as Letter + 1)).expect("B_m is well formed")
}

/// A and B_m amalgamated along b = x_m, with x_m eliminated: generators
/// a, b, x₀, …, x_{m−1}.
pub fn group_q(m: usize) -> Presentation {
    let mut names = vec!["a".to_string(), "b".to_string()];
    names.extend((0..m).map(|i| format!("x{i}")));
    let mut rels = a_relators(1, 2);
    rels.extend(bm_relators(m, |i| if i == m { 2 } else { i as Letter + 3 }));
    Presentation::new(names, rels).expect("Q is well formed")
}

/// Presentation complex of A.
pub fn complex_ka() -> TwoComplex {
    group_a().presentation_complex()
}

/// The flag complex F: outer square E, N, W, S; inner square e, n, w, s on
/// the horizontal chord E–e–w–W; spokes to the inner square. Bold edge E–S.
pub fn complex_f() -> FlagComplex {
    let v = ["E", "W", "N", "S", "n", "s", "e", "w"];
    let edges = [
        ("E", "e"),
        ("e", "w"),
        ("w", "W"),
        ("W", "S"),
        ("S", "E"),
        ("E", "N"),
        ("N", "W"),
        ("e", "n"),
        ("n", "w"),
        ("w", "s"),
        ("s", "e"),
        ("E", "n"),
        ("n", "W"),
        ("W", "s"),
        ("s", "E"),
        ("N", "n"),
        ("S", "s"),
    ];
    FlagComplex::new(
        v.iter().map(|s| s.to_string()).collect(),
        edges.iter().map(|(a, b)| vec![a.to_string(), b.to_string()]).collect(),
        true,
    )
    .expect("F is well formed")
}

/// Second barycentric subdivision of `K_A`, as a simplicial complex.
pub fn complex_k() -> Result<FlagComplex> {
    to_simplicial(&barycentric_subdivision(&complex_ka(), 2)?)
}

/// `K` glued to `F` along the bold edge, at the first edge of `K` in index order.
pub fn complex_l() -> Result<FlagComplex> {
    let k = complex_k()?;
    let (u, v) = k.edges()[0];
    let (u, v) = (k.vertices()[u].clone(), k.vertices()[v].clone());
    glue_edge(&k, &complex_f(), (&u, &v), ("E", "S"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_relator_lengths() {
        let lens: Vec<usize> = group_a().relators().iter().map(Word::len).collect();
        assert_eq!(lens, vec![145, 121]);
    }

    #[test]
    fn bm_one_is_bs12() {
        let p = group_bm(1);
        assert_eq!(p.relators().len(), 1);
        assert_eq!(p.render(&p.relators()[0]), "x1^-1 x0 x1 x0^-1 x0^-1");
    }

    #[test]
    fn q_is_balanced() {
        for m in 1..=5 {
            let q = group_q(m);
            assert_eq!(q.ngens(), q.relators().len());
            assert_eq!(q.presentation_complex().euler_characteristic(), 1);
        }
        assert_eq!(group_q(2).ngens(), 4);
    }

    #[test]
    fn f_transcription() {
        let f = complex_f();
        assert_eq!(f.f_vector(), vec![8, 17, 10]);
        assert_eq!(f.euler_characteristic(), 1);
        assert!(f.is_flag() && f.is_connected());
        assert_eq!(f.two_skeleton().homology().betti, [1, 0, 0]);
        assert!(f.contains(&[f.vertex_index("E").unwrap(), f.vertex_index("S").unwrap()]));
    }

    #[test]
    fn unknown_builtin() {
        assert!(builtin("groupZ", None).is_err());
        assert!(builtin("groupBm", None).is_err());
        assert!(matches!(builtin("groupBm", Some(2)).unwrap(), Builtin::Presentation(_)));
    }
}
