//! Built-in algebras: the six-dimensional nilpotent table, `𝔥₈` with its
//! complex structure, the `𝔥₁₁` complex family and `𝔯₄`.

use std::sync::OnceLock;

use crate::coeff::{parse_scalar, ParameterContext, Poly, Scalar};
use crate::complex::{
    AlmostComplexStructure, BigradedStructure, ComplexError, ComplexStructureInput,
};
use crate::exterior::parse_element_with;
use crate::lie::{
    default_generators, parse_sage_dict, parse_salamon, LieError, StructureConstants,
};
use crate::linalg::Matrix;
use crate::parametric::ConditionSet;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("catalog entry {name}: {source}")]
    Structure { name: String, source: LieError },
    #[error("catalog entry {name}: {source}")]
    Complex { name: String, source: ComplexError },
}

/// A value printed for an entry, with where it was printed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expected {
    pub theory: &'static str,
    pub value: &'static str,
    pub location: &'static str,
}

/// A complex structure attached to an entry, with the stratum it lives on.
#[derive(Clone, Debug)]
pub struct ComplexAttachment {
    pub label: String,
    pub input: ComplexStructureInput,
    pub base: ConditionSet,
}

/// The normalization and normal form recorded for an lcs family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcsNotes {
    /// Matrix entries in the free parameters of the nondegenerate family.
    pub normalization: Vec<Vec<&'static str>>,
    pub theta: &'static str,
    /// Normal form in a single parameter `sigma`.
    pub normal_form: &'static str,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub aliases: Vec<String>,
    pub structure: StructureConstants,
    pub nilpotent: bool,
    pub expected: Vec<Expected>,
    pub complex: Vec<ComplexAttachment>,
    pub lcs: Option<LcsNotes>,
}

impl CatalogEntry {
    pub fn matches(&self, name: &str) -> bool {
        self.name == name || self.aliases.iter().any(|a| a == name)
    }

    pub fn expected(&self, theory: &str) -> Option<&Expected> {
        self.expected.iter().find(|e| e.theory == theory)
    }
}

const POINCARE_LOC: &str = "printed Poincaré table";

/// `(name, dictionary, expected Poincaré polynomial)`.
const NILPOTENT_6: [(&str, &str, &str); 26] = [
    (
        "g_{6.N2}",
        "{(0,4):E.gens()[1], (0,5):E.gens()[2], (0,2):E.gens()[3], (0,3):E.gens()[4], }",
        "x^6 + 2*x^5 + 3*x^4 + 4*x^3 + 3*x^2 + 2*x + 1",
    ),
    (
        "g_{6.N19}",
        "{(5,2):E.gens()[1], (0,4):E.gens()[1], (0,5):E.gens()[2]-E.gens()[3], (0,2):E.gens()[3], (0,3):E.gens()[4], }",
        "x^6 + 2*x^5 + 3*x^4 + 4*x^3 + 3*x^2 + 2*x + 1",
    ),
    (
        "g_{6.N11}",
        "{(5,2):E.gens()[1], (0,5):E.gens()[2]-E.gens()[3], (0,2):E.gens()[3], (0,3):E.gens()[4], }",
        "x^6 + 2*x^5 + 4*x^4 + 6*x^3 + 4*x^2 + 2*x + 1",
    ),
    (
        "g_{6.N18}^{1}",
        "{(2,4):E.gens()[0]+E.gens()[1], (0,2):E.gens()[1], (0,4):E.gens()[3], (4,3):E.gens()[5], (1,2):E.gens()[5], }",
        "x^6 + 2*x^5 + 4*x^4 + 6*x^3 + 4*x^2 + 2*x + 1",
    ),
    (
        "g_{6.N18}^{-1}",
        "{(4,2):E.gens()[0]+E.gens()[1], (2,0):E.gens()[1], (4,0):E.gens()[3], (4,3):E.gens()[5], (2,1):E.gens()[5], }",
        "x^6 + 2*x^5 + 4*x^4 + 6*x^3 + 4*x^2 + 2*x + 1",
    ),
    (
        "g_{6.N20}",
        "{(5,3):E.gens()[1], (0,4):E.gens()[1], (0,5):2*E.gens()[2], (0,2):1/2*E.gens()[3], (0,3):E.gens()[4], (5,2):1/2*E.gens()[4],}",
        "x^6 + 2*x^5 + 3*x^4 + 4*x^3 + 3*x^2 + 2*x + 1",
    ),
    (
        "g_{6.N6}",
        "{(0,2):E.gens()[1], (5,3):1/2*E.gens()[1], (0,5):E.gens()[2], (0,3):1/2*E.gens()[4], }",
        "x^6 + 3*x^5 + 6*x^4 + 8*x^3 + 6*x^2 + 3*x + 1",
    ),
    (
        "g_{6.N7}",
        "{(0,3):E.gens()[1], (2,0):E.gens()[3], (2,4):E.gens()[5], }",
        "x^6 + 3*x^5 + 6*x^4 + 8*x^3 + 6*x^2 + 3*x + 1",
    ),
    (
        "g_{6.N1}",
        "{(0,3):E.gens()[1], (0,2):E.gens()[3], (0,4):E.gens()[5], }",
        "x^6 + 3*x^5 + 6*x^4 + 8*x^3 + 6*x^2 + 3*x + 1",
    ),
    (
        "g_{6.N3}",
        "{(0,4):E.gens()[1], (0,2):E.gens()[3], (2,4):E.gens()[5], }",
        "x^6 + 3*x^5 + 8*x^4 + 12*x^3 + 8*x^2 + 3*x + 1",
    ),
    (
        "g_{6.N17}",
        "{(0,4):E.gens()[3], (2,1):E.gens()[3], (0,5):E.gens()[4], (0,2): E.gens()[5], }",
        "x^6 + 3*x^5 + 5*x^4 + 6*x^3 + 5*x^2 + 3*x + 1",
    ),
    (
        "g_{6.N15}",
        "{(0,4):E.gens()[3], (2,1):E.gens()[3], (2,5):E.gens()[3], (0,5):E.gens()[4], (0,2):E.gens()[5], }",
        "x^6 + 3*x^5 + 5*x^4 + 6*x^3 + 5*x^2 + 3*x + 1",
    ),
    (
        "g_{5.6}+g_1",
        "{(0,4):E.gens()[3], (2,5):E.gens()[3], (0,5): E.gens()[4], (0,2):E.gens()[5], }",
        "x^6 + 3*x^5 + 5*x^4 + 6*x^3 + 5*x^2 + 3*x + 1",
    ),
    (
        "g_{5.2}+g_1",
        "{(0,4):E.gens()[3], (0,5):E.gens()[4], (0,2):E.gens()[5], }",
        "x^6 + 3*x^5 + 5*x^4 + 6*x^3 + 5*x^2 + 3*x + 1",
    ),
    (
        "g_{6.N9}",
        "{(0,5):E.gens()[1], (0,4):E.gens()[3], (5,2):E.gens()[3], (0,2):E.gens()[5], }",
        "x^6 + 3*x^5 + 5*x^4 + 6*x^3 + 5*x^2 + 3*x + 1",
    ),
    (
        "g_{6.N8}",
        "{(4,3):E.gens()[1], (4,2):E.gens()[1], (0,4):E.gens()[2], (0,2):E.gens()[5], }",
        "x^6 + 3*x^5 + 5*x^4 + 6*x^3 + 5*x^2 + 3*x + 1",
    ),
    (
        "g_{6.N16}",
        "{(0,3):E.gens()[1], (2,5):E.gens()[1], (0,5):E.gens()[3], (2,4):E.gens()[3], (0,4):E.gens()[5], }",
        "x^6 + 3*x^5 + 4*x^4 + 4*x^3 + 4*x^2 + 3*x + 1",
    ),
    (
        "g_{6.N10}",
        "{(0,5):E.gens()[1], (2,4):1/2*E.gens()[1], (0,4):E.gens()[3], (5,2):1/2*E.gens()[3], (0,2):1/2*E.gens()[5], }",
        "x^6 + 3*x^5 + 5*x^4 + 6*x^3 + 5*x^2 + 3*x + 1",
    ),
    (
        "g_{4.1}+2g_1",
        "{(0,3):E.gens()[1], (0,2):E.gens()[3], }",
        "x^6 + 4*x^5 + 7*x^4 + 8*x^3 + 7*x^2 + 4*x + 1",
    ),
    (
        "g_{5.5}+g_1",
        "{(0,4):E.gens()[3], (2,5):E.gens()[3], (0,2):E.gens()[5], }",
        "x^6 + 4*x^5 + 7*x^4 + 8*x^3 + 7*x^2 + 4*x + 1",
    ),
    (
        "g_{6.N4}",
        "{(0,4):E.gens()[3], (2,1):E.gens()[3], (0,2):E.gens()[5], }",
        "x^6 + 4*x^5 + 8*x^4 + 10*x^3 + 8*x^2 + 4*x + 1",
    ),
    (
        "2g_{3.1}",
        "{(0,4):E.gens()[1], (2,5):E.gens()[3], }",
        "x^6 + 4*x^5 + 8*x^4 + 10*x^3 + 8*x^2 + 4*x + 1",
    ),
    (
        "g_{5.1}+g_1",
        "{(0,4):E.gens()[1], (0,2):E.gens()[3], }",
        "x^6 + 4*x^5 + 9*x^4 + 12*x^3 + 9*x^2 + 4*x + 1",
    ),
    (
        "g_{6.N5}",
        "{(0,5):E.gens()[1], (2,4):E.gens()[1], (0,4):E.gens()[3], (5,2):E.gens()[3], }",
        "x^6 + 4*x^5 + 8*x^4 + 10*x^3 + 8*x^2 + 4*x + 1",
    ),
    ("g_{3.1}+3g_1", "{(0,2):E.gens()[1], }", "x^6 + 5*x^5 + 11*x^4 + 14*x^3 + 11*x^2 + 5*x + 1"),
    ("6g_1", "{}", "x^6 + 6*x^5 + 15*x^4 + 20*x^3 + 15*x^2 + 6*x + 1"),
];

fn sage(name: &str, dict: &str, n: usize) -> Result<StructureConstants, CatalogError> {
    let s = parse_sage_dict(dict, &default_generators(n), &ParameterContext::new()).map_err(
        |source| CatalogError::Structure {
            name: name.to_string(),
            source,
        },
    )?;
    check(name, s)
}

fn check(name: &str, s: StructureConstants) -> Result<StructureConstants, CatalogError> {
    s.ensure_jacobi()
        .map_err(|source| CatalogError::Structure {
            name: name.to_string(),
            source,
        })?;
    Ok(s)
}

fn h8() -> Result<CatalogEntry, CatalogError> {
    let name = "h8";
    let structure = sage(name, "{(2,3):-E.gens()[0], }", 6)?;
    let cplx = |source| CatalogError::Complex {
        name: name.to_string(),
        source,
    };
    let j = AlmostComplexStructure::standard(6).map_err(cplx)?;
    Ok(CatalogEntry {
        name: name.to_string(),
        aliases: vec!["g_{3.1}+3g_1/J".to_string()],
        structure,
        nilpotent: true,
        expected: vec![
            Expected {
                theory: "betti",
                value: "1,5,11,14,11,5,1",
                location: "printed de Rham homology",
            },
            Expected {
                theory: "images",
                value: "[-e2^e3, 0, 0, 0, 0, 0]",
                location: "printed structure equations",
            },
            Expected {
                theory: "dolbeault",
                value: "1,5,11,14,11,5,1",
                location: "printed hDol",
            },
            Expected {
                theory: "bott-chern",
                value: "1,4,10,16,14,6,1",
                location: "printed hBC",
            },
            Expected {
                theory: "aeppli",
                value: "1,6,14,16,10,4,1",
                location: "printed hA",
            },
        ],
        complex: vec![ComplexAttachment {
            label: "J e0 = e1, J e2 = e3, J e4 = e5".to_string(),
            input: ComplexStructureInput::Real {
                j,
                chosen: Some(vec![0, 2, 4]),
            },
            base: ConditionSet::new(),
        }],
        lcs: None,
    })
}

/// `dφ¹ = φ⁰∧φ̄⁰`, `dφ² = φ⁰∧φ¹ + B·φ⁰∧φ̄¹ + |B−1|·φ¹∧φ̄⁰` on the branch
/// where `|B − 1| = sign·(B − 1)`.
pub fn h11_family(positive: bool) -> Result<ComplexAttachment, ComplexError> {
    let ctx = ParameterContext::from_names(&["B"])?;
    let gens = crate::cohomology::bigraded_names(3);
    let abs = if positive { "(B - 1)" } else { "(1 - B)" };
    let parse = |t: &str| parse_element_with(t, &gens, &ctx);
    let images = vec![
        parse("0")?,
        parse("phi0^barphi0")?,
        parse(&format!("phi0^phi1 + B*phi0^barphi1 + {abs}*phi1^barphi0"))?,
    ];
    let structure = BigradedStructure::from_holomorphic(images, ctx.clone())?;
    let b = Scalar::param(0).to_poly().expect("polynomial");
    let b1 = &b - &Poly::one();
    let mut base = ConditionSet::new();
    base.add_inequation(&b);
    base.add_inequation(&b1);
    base.add_sign(b1, positive, if positive { "B > 1" } else { "B < 1" });
    Ok(ComplexAttachment {
        label: if positive { "B > 1" } else { "B < 1" }.to_string(),
        input: ComplexStructureInput::Direct(structure),
        base,
    })
}

fn h11() -> Result<CatalogEntry, CatalogError> {
    let name = "h11";
    let structure = check(
        name,
        parse_salamon("(0,0,0,12,13,14+23)", 6).map_err(|source| CatalogError::Structure {
            name: name.to_string(),
            source,
        })?,
    )?;
    let cplx = |source| CatalogError::Complex {
        name: name.to_string(),
        source,
    };
    Ok(CatalogEntry {
        name: name.to_string(),
        aliases: vec!["(0,0,0,12,13,14+23)".to_string()],
        structure,
        nilpotent: true,
        expected: vec![
            Expected {
                theory: "poincare",
                value: "x^6 + 3*x^5 + 6*x^4 + 8*x^3 + 6*x^2 + 3*x + 1",
                location: POINCARE_LOC,
            },
            Expected {
                theory: "dolbeault",
                value: "1,3,5,6,5,3,1",
                location: "printed generic hDol",
            },
        ],
        complex: vec![
            h11_family(true).map_err(cplx)?,
            h11_family(false).map_err(cplx)?,
        ],
        lcs: None,
    })
}

fn r4() -> Result<CatalogEntry, CatalogError> {
    let name = "r_4";
    let structure = check(
        name,
        parse_salamon("(14+24,24+34,34,0)", 4).map_err(|source| CatalogError::Structure {
            name: name.to_string(),
            source,
        })?,
    )?;
    Ok(CatalogEntry {
        name: name.to_string(),
        aliases: vec!["r4".to_string()],
        structure,
        nilpotent: false,
        expected: vec![
            Expected {
                theory: "images",
                value: "[e0^e3 + e1^e3, e1^e3 + e2^e3, e2^e3, 0]",
                location: "printed structure equations",
            },
            Expected {
                theory: "degree3",
                value: "[3*e0^e1^e2^e3, 0, 0, 0]",
                location: "printed unimodularity check",
            },
            Expected {
                theory: "theta",
                value: "r1*e3",
                location: "printed closed 1-form",
            },
            Expected {
                theory: "omega",
                value: "r5*e0^e3 + r4*e1^e2 + r3*e1^e3 + r2*e2^e3",
                location: "printed lcs form",
            },
            Expected {
                theory: "nondegeneracy",
                value: "2*r4*r5 != 0",
                location: "printed lcs form",
            },
            Expected {
                theory: "normalized",
                value: "e0^e3 + r4/r5^2*e1^e2",
                location: "printed normalized form",
            },
        ],
        complex: Vec::new(),
        lcs: Some(LcsNotes {
            normalization: vec![
                vec!["1/r5", "0", "0", "0"],
                vec!["0", "1/r5", "0", "0"],
                vec!["0", "0", "1/r5", "0"],
                vec!["0", "r2/r4", "-r3/r4", "1"],
            ],
            theta: "-2*e3",
            normal_form: "e0^e3 + sigma*e1^e2",
        }),
    })
}

/// Parse the normalization matrix in a context naming the family parameters.
pub fn normalization_matrix(
    notes: &LcsNotes,
    ctx: &ParameterContext,
) -> Result<Matrix<Scalar>, crate::coeff::CoeffError> {
    let n = notes.normalization.len();
    let mut m = Matrix::zeros(n, n);
    for (i, row) in notes.normalization.iter().enumerate() {
        for (j, t) in row.iter().enumerate() {
            m.set(i, j, parse_scalar(t, ctx)?);
        }
    }
    Ok(m)
}

fn build() -> Result<Vec<CatalogEntry>, CatalogError> {
    let mut out = Vec::new();
    for (name, dict, poly) in NILPOTENT_6 {
        out.push(CatalogEntry {
            name: name.to_string(),
            aliases: Vec::new(),
            structure: sage(name, dict, 6)?,
            nilpotent: true,
            expected: vec![Expected {
                theory: "poincare",
                value: poly,
                location: POINCARE_LOC,
            }],
            complex: Vec::new(),
            lcs: None,
        });
    }
    out.push(h8()?);
    out.push(h11()?);
    out.push(r4()?);
    out.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(out)
}

/// All entries, sorted by name.
pub fn load_catalog() -> Result<&'static [CatalogEntry], CatalogError> {
    static CATALOG: OnceLock<Result<Vec<CatalogEntry>, CatalogError>> = OnceLock::new();
    CATALOG.get_or_init(build).as_deref().map_err(Clone::clone)
}

pub fn find(name: &str) -> Result<Option<&'static CatalogEntry>, CatalogError> {
    Ok(load_catalog()?.iter().find(|e| e.matches(name)))
}

/// The 26 entries of the six-dimensional nilpotent table.
pub fn nilpotent_six() -> Result<Vec<&'static CatalogEntry>, CatalogError> {
    let names: Vec<&str> = NILPOTENT_6.iter().map(|(n, _, _)| *n).collect();
    Ok(load_catalog()?
        .iter()
        .filter(|e| names.contains(&e.name.as_str()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::Field;

    #[test]
    fn loads_and_sorts() {
        let c = load_catalog().unwrap();
        assert_eq!(c.len(), 29);
        assert!(c.windows(2).all(|w| w[0].name < w[1].name));
        assert_eq!(nilpotent_six().unwrap().len(), 26);
        assert!(find("6g_1")
            .unwrap()
            .unwrap()
            .structure
            .coefficients()
            .is_empty());
        assert!(find("nope").unwrap().is_none());
    }

    #[test]
    fn half_coefficients_and_aliases() {
        let n10 = find("g_{6.N10}").unwrap().unwrap();
        assert_eq!(n10.structure.coefficient(1, 2, 4), Scalar::rat(1, 2));
        let r4 = find("r4").unwrap().unwrap();
        assert_eq!(r4.name, "r_4");
        assert_eq!(
            r4.structure.render_images(),
            "[e0^e3 + e1^e3, e1^e3 + e2^e3, e2^e3, 0]"
        );
        let key = find("g_{6.N18}^{-1}").unwrap().unwrap();
        assert_eq!(key.structure.coefficient(1, 0, 2), Scalar::int(-1));
    }

    #[test]
    fn normalization_parses() {
        let ctx = ParameterContext::from_names(&["r1", "r2", "r3", "r4", "r5"]).unwrap();
        let m = normalization_matrix(find("r_4").unwrap().unwrap().lcs.as_ref().unwrap(), &ctx)
            .unwrap();
        assert_eq!(m.get(3, 3), &Scalar::one());
        assert!(!m.get(0, 0).is_constant());
    }
}
