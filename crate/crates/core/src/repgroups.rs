//! Twisted representation groups: the criterion for a single extension and
//! the exhaustive search over all extensions of `G` by the multiplier.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::cohomology::{cohomology_group, h2_class_representatives, twisted_multiplier, CocycleTable, TwistedMultiplier};
use crate::error::{Error, Result};
use crate::extensions::{build_extension, enumerate_module_structures, is_stem, ExtensionData};
use crate::gmodule::{dual_characters, is_equivariant_character, SignCharacter, TwistedModule};
use crate::group::{is_isomorphic, standard_group, FiniteGroup, GroupFingerprint, StandardFamily};

/// The three numerical conditions for an extension to be a twisted
/// representation group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub cond_order: bool,
    pub cond_characters: bool,
    pub cond_h1: bool,
    pub kernel_order: u64,
    pub multiplier_order: u64,
    pub characters: u64,
    pub equivariant_characters: u64,
    /// `|H¹(G, ℂ*_φ)| = |H²(G, ℤ_φ)|`
    pub h1_base: u64,
    /// `|H¹(Γ, ℂ*_{φ∘π})| = |H²(Γ, ℤ_{φ∘π})|`
    pub h1_extension: u64,
}

impl CriterionReport {
    pub fn verdict(&self) -> bool {
        self.cond_order && self.cond_characters && self.cond_h1
    }
}

fn count_equivariant(ext: &ExtensionData, phi: &SignCharacter) -> Result<(u64, u64)> {
    let chars = dual_characters(ext.module())?;
    let eq = chars
        .iter()
        .filter(|c| is_equivariant_character(ext.base(), c, ext.module(), phi))
        .count();
    Ok((chars.len() as u64, eq as u64))
}

/// `|H²(G, ℤ_φ)|`, the order of `H¹(G, ℂ*_φ)`.
pub fn h1_order(g: &FiniteGroup, phi: &SignCharacter, budget: &Budget) -> Result<u64> {
    let m = TwistedModule::sign_module(g, phi)?;
    Ok(cohomology_group(g, &m, 2, budget)?.order())
}

/// Evaluates the order, character and `H¹` conditions.
pub fn satisfies_criterion(ext: &ExtensionData, mult: &TwistedMultiplier, budget: &Budget) -> Result<CriterionReport> {
    let (characters, equivariant) = count_equivariant(ext, mult.phi())?;
    let kernel_order = ext.module().order().expect("finite kernel");
    let h1_base = h1_order(ext.base(), mult.phi(), budget)?;
    let pulled = mult.phi().pull_back(ext.projection());
    let h1_extension = h1_order(ext.gamma(), &pulled, budget)?;
    Ok(CriterionReport {
        cond_order: kernel_order == mult.order(),
        cond_characters: equivariant == characters,
        cond_h1: h1_base == h1_extension,
        kernel_order,
        multiplier_order: mult.order(),
        characters,
        equivariant_characters: equivariant,
        h1_base,
        h1_extension,
    })
}

/// The classical test for trivial actions: a stem extension whose kernel
/// has the order of the Schur multiplier.
pub fn classical_criterion(ext: &ExtensionData, mult: &TwistedMultiplier) -> bool {
    ext.module().order() == Some(mult.order()) && is_stem(ext)
}

/// `|Γ| = |G|·|H²(G, ℂ*_φ)|`.
pub fn minimality_check(g: &FiniteGroup, mult: &TwistedMultiplier, gamma: &FiniteGroup) -> bool {
    gamma.order() as u64 == g.order() as u64 * mult.order()
}

#[derive(Debug, Clone)]
pub struct RepresentationGroup {
    pub group: FiniteGroup,
    pub fingerprint: GroupFingerprint,
    pub identified_as: Option<String>,
    pub witness: ExtensionData,
    pub report: CriterionReport,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub multiplier: Vec<u64>,
    pub groups: Vec<RepresentationGroup>,
    /// `(module structure, class)` pairs considered.
    pub candidates: usize,
    /// Candidates passing the criterion before isomorphism dedupe.
    pub accepted: usize,
}

#[derive(Debug, Clone, Default)]
pub struct SearchOptions {
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Shuffles candidate evaluation order (the result must not change).
    pub shuffle_seed: Option<u64>,
}

/// Constructions used to name output groups.
fn library(order: usize) -> Vec<(String, StandardFamily)> {
    use StandardFamily::*;
    let mut lib = vec![(format!("C{order}"), Cyclic { n: order })];
    if order % 2 == 0 && order >= 4 {
        lib.push((format!("D{order}"), Dihedral { n: order / 2 }));
        lib.push((format!("C2xC{}", order / 2), DirectProduct {
            left: Box::new(Cyclic { n: 2 }),
            right: Box::new(Cyclic { n: order / 2 }),
        }));
    }
    if order.is_power_of_two() && order >= 8 {
        lib.push((format!("Q{order}"), GeneralizedQuaternion { order }));
        lib.push((format!("C2xD{}", order / 2), DirectProduct {
            left: Box::new(Cyclic { n: 2 }),
            right: Box::new(Dihedral { n: order / 4 }),
        }));
        lib.push((format!("C2xQ{}", order / 2), DirectProduct {
            left: Box::new(Cyclic { n: 2 }),
            right: Box::new(GeneralizedQuaternion { order: order / 2 }),
        }));
        lib.push((format!("C4xC{}", order / 4), DirectProduct {
            left: Box::new(Cyclic { n: 4 }),
            right: Box::new(Cyclic { n: order / 4 }),
        }));
    }
    if order.is_power_of_two() && order >= 16 {
        lib.push((format!("SD{order}"), Semidihedral { order }));
        lib.push((format!("C2xC2xC{}", order / 4), DirectProduct {
            left: Box::new(DirectProduct {
                left: Box::new(Cyclic { n: 2 }),
                right: Box::new(Cyclic { n: 2 }),
            }),
            right: Box::new(Cyclic { n: order / 4 }),
        }));
    }
    lib
}

/// Best-effort name of a group from a small library of constructions.
pub fn identify(gamma: &FiniteGroup, budget: &Budget) -> Option<String> {
    if gamma.order() > budget.max_iso_order {
        return None;
    }
    let fp = gamma.fingerprint();
    library(gamma.order()).into_iter().find_map(|(name, fam)| {
        let h = standard_group(&fam, budget).ok()?;
        if h.fingerprint() != fp {
            return None;
        }
        is_isomorphic(gamma, &h, budget).ok().flatten().map(|_| name)
    })
}

struct Candidate {
    index: usize,
    module: TwistedModule,
    beta: CocycleTable,
}

/// All `φ`-twisted representation groups of `G` up to isomorphism, sorted
/// by fingerprint.
pub fn twisted_representation_groups(
    g: &FiniteGroup,
    phi: &SignCharacter,
    budget: &Budget,
    options: &SearchOptions,
) -> Result<SearchResult> {
    let mult = twisted_multiplier(g, phi, budget)?;
    if mult.order() == 1 {
        let module = TwistedModule::trivial(g, 0, &[])?;
        let beta = CocycleTable::zero(g.order(), 2, 0);
        let ext = build_extension(g, &module, &beta, budget)?;
        let report = satisfies_criterion(&ext, &mult, budget)?;
        let group = ext.gamma().clone().with_name(g.name());
        return Ok(SearchResult {
            multiplier: vec![],
            groups: vec![RepresentationGroup {
                fingerprint: group.fingerprint(),
                identified_as: identify(&group, budget),
                group,
                witness: ext,
                report,
            }],
            candidates: 1,
            accepted: 1,
        });
    }
    let target = g.order() as u64 * mult.order();
    if target > budget.max_extension_order as u64 {
        return Err(Error::resource("representation group order", target, budget.max_extension_order as u64));
    }

    // Actions whose characters are all equivariant; the rest cannot pass.
    let mut candidates = Vec::new();
    let mut examined = 0usize;
    for module in enumerate_module_structures(g, mult.invariants(), budget)? {
        let classes = h2_class_representatives(g, &module, budget)?;
        examined += classes.len();
        let chars = dual_characters(&module)?;
        if !chars.iter().all(|c| is_equivariant_character(g, c, &module, phi)) {
            continue;
        }
        for beta in classes {
            candidates.push(Candidate {
                index: candidates.len(),
                module: module.clone(),
                beta,
            });
        }
    }
    if let Some(seed) = options.shuffle_seed {
        candidates.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }

    let trivial_phi = phi.is_trivial();
    let evaluate = |c: &Candidate| -> Result<Option<(usize, ExtensionData, CriterionReport)>> {
        let ext = build_extension(g, &c.module, &c.beta, budget)?;
        let report = satisfies_criterion(&ext, &mult, budget)?;
        let accepted = if trivial_phi {
            let classical = classical_criterion(&ext, &mult);
            if classical != report.verdict() {
                return Err(Error::Arithmetic(
                    "classical and twisted criteria disagree on a trivial action".into(),
                ));
            }
            classical
        } else {
            report.verdict()
        };
        Ok(accepted.then_some((c.index, ext, report)))
    };
    let run = || -> Result<Vec<_>> {
        candidates
            .par_iter()
            .map(evaluate)
            .collect::<Result<Vec<_>>>()
            .map(|v| v.into_iter().flatten().collect())
    };
    let mut passing: Vec<(usize, ExtensionData, CriterionReport)> = match options.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::Arithmetic(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    let accepted = passing.len();

    let mut keyed: Vec<(GroupFingerprint, usize, ExtensionData, CriterionReport)> = passing
        .drain(..)
        .map(|(i, e, r)| (e.gamma().fingerprint(), i, e, r))
        .collect();
    keyed.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));
    let mut groups: Vec<RepresentationGroup> = Vec::new();
    for (fp, _, ext, report) in keyed {
        let mut duplicate = false;
        for kept in groups.iter().filter(|k| k.fingerprint == fp) {
            if is_isomorphic(ext.gamma(), &kept.group, budget)?.is_some() {
                duplicate = true;
                break;
            }
        }
        if duplicate {
            continue;
        }
        let label = identify(ext.gamma(), budget);
        let name = label.clone().unwrap_or_else(|| format!("Gamma{}_{}", ext.gamma().order(), groups.len() + 1));
        let ext = ext.with_gamma_name(name);
        groups.push(RepresentationGroup {
            group: ext.gamma().clone(),
            fingerprint: fp,
            identified_as: label,
            witness: ext,
            report,
        });
    }
    Ok(SearchResult {
        multiplier: mult.invariants().to_vec(),
        groups,
        candidates: examined,
        accepted,
    })
}
