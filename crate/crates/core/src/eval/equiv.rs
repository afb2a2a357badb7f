use std::collections::BTreeSet;
use std::fmt;

use crate::enumerate::{Enumerator, SearchConfig};
use crate::ground::{typecheck, GroundTerm, GroundingLanguage, Judgment, TypeError, TypedVar};
use crate::logic::{FoTerm, Formula};
use crate::report::{Item, Report};

use super::identity::same_rule;
use super::map::DenotationMap;
use super::reduce::{canonical_everywhere, normalize, EvalConfig, EvalError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbeConfig {
    pub individual_bound: usize,
    pub ground_size_bound: usize,
    pub sample_count: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { individual_bound: 3, ground_size_bound: 6, sample_count: 64 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Equivalent { tested: usize },
    Counterexample { instance: String, left: GroundTerm, right: GroundTerm },
    Unknown { reason: String },
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Equivalent { tested: 1 } => write!(f, "Equivalent(1 instance)"),
            Verdict::Equivalent { tested } => write!(f, "Equivalent({tested} instances)"),
            Verdict::Counterexample { instance, left, right } => {
                write!(f, "Counterexample({instance})\n  left:  {left}\n  right: {right}")
            }
            Verdict::Unknown { reason } => write!(f, "Unknown({reason})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EquivError {
    #[error("{0}")]
    Type(#[from] TypeError),
    #[error("the judgments differ: `{left}` against `{right}`")]
    Judgment { left: Judgment, right: Judgment },
}

/// One closing instantiation: individuals first, then a closed ground per
/// context type.
#[derive(Clone, Debug)]
pub struct Instance {
    pub individuals: Vec<(String, FoTerm)>,
    pub grounds: Vec<(Formula, GroundTerm)>,
}

impl Instance {
    pub fn apply(&self, t: &GroundTerm) -> GroundTerm {
        let mut out = t.clone();
        for (x, k) in &self.individuals {
            out = out.subst_individual(x, k);
        }
        let vars: Vec<TypedVar> = out.fv_typed().into_iter().collect();
        for v in vars {
            if let Some((_, g)) = self.grounds.iter().find(|(ty, _)| *ty == v.ty) {
                out = out.subst_typed(&v, g);
            }
        }
        out
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.individuals.iter().map(|(x, k)| format!("{x} := {k}")).collect();
        parts.extend(self.grounds.iter().map(|(ty, g)| format!("ξ^{{{ty}}} := {g}")));
        if parts.is_empty() {
            write!(f, "closed")
        } else {
            write!(f, "{}", parts.join("; "))
        }
    }
}

/// Index tuples in order of their sum, so that every coordinate moves early.
fn diagonal(lens: &[usize], cap: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if lens.contains(&0) {
        return out;
    }
    let max_sum: usize = lens.iter().map(|n| n - 1).sum();
    for s in 0..=max_sum {
        let mut cur = vec![0; lens.len()];
        fill(lens, s, 0, &mut cur, &mut out, cap);
        if out.len() >= cap {
            break;
        }
    }
    out
}

fn fill(lens: &[usize], left: usize, i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, cap: usize) {
    if out.len() >= cap {
        return;
    }
    if i == lens.len() {
        if left == 0 {
            out.push(cur.clone());
        }
        return;
    }
    for v in 0..lens[i].min(left + 1) {
        cur[i] = v;
        fill(lens, left - v, i + 1, cur, out, cap);
    }
}

/// Closing instantiations of the free parts of `terms`, at most `sample_count`.
pub fn instances(
    terms: &[&GroundTerm],
    inds: &BTreeSet<String>,
    lang: &GroundingLanguage,
    probe: ProbeConfig,
) -> Result<Vec<Instance>, String> {
    let domain = lang.base.domain.first(probe.individual_bound);
    if !inds.is_empty() && domain.is_empty() {
        return Err("the individual domain is empty".into());
    }
    let names: Vec<&String> = inds.iter().collect();
    let assignments: Vec<Vec<usize>> = diagonal(&vec![domain.len(); names.len()], probe.sample_count);
    let per = probe.sample_count.div_ceil(assignments.len().max(1)).max(1);
    let mut out = Vec::new();
    for a in &assignments {
        let individuals: Vec<(String, FoTerm)> =
            names.iter().zip(a).map(|(x, &i)| ((*x).clone(), domain[i].clone())).collect();
        let mut types: Vec<Formula> = Vec::new();
        for t in terms {
            let mut inst = (*t).clone();
            for (x, k) in &individuals {
                inst = inst.subst_individual(x, k);
            }
            for v in inst.fv_typed() {
                if !types.contains(&v.ty) {
                    types.push(v.ty.clone());
                }
            }
        }
        let mut search = Enumerator::new(lang, SearchConfig::default(), &types);
        let mut candidates = Vec::new();
        for ty in &types {
            let c = search.closed(ty, probe.ground_size_bound, probe.sample_count);
            if c.is_empty() {
                return Err(format!("no closed ground of `{ty}` up to size {}", probe.ground_size_bound));
            }
            candidates.push(c);
        }
        let lens: Vec<usize> = candidates.iter().map(Vec::len).collect();
        for idx in diagonal(&lens, per) {
            let grounds =
                types.iter().zip(&idx).zip(&candidates).map(|((ty, &i), c)| (ty.clone(), c[i].clone())).collect();
            out.push(Instance { individuals: individuals.clone(), grounds });
            if out.len() >= probe.sample_count {
                return Ok(out);
            }
        }
    }
    Ok(out)
}

fn same_normal_form(a: &GroundTerm, b: &GroundTerm, map: &DenotationMap) -> bool {
    a.alpha_eq_with(b, &|x, y| same_rule(x, map, y, map))
}

/// Extensional equality: identical normal forms on every probed instance.
pub fn equivalent(
    t: &GroundTerm,
    u: &GroundTerm,
    lang: &GroundingLanguage,
    map: &DenotationMap,
    probe: ProbeConfig,
    cfg: EvalConfig,
) -> Result<Verdict, EquivError> {
    let (jt, ju) = (typecheck(t, lang)?, typecheck(u, lang)?);
    if !jt.same_shape(&ju) {
        return Err(EquivError::Judgment { left: jt, right: ju });
    }
    let insts = if jt.is_closed() && ju.is_closed() {
        vec![Instance { individuals: Vec::new(), grounds: Vec::new() }]
    } else {
        match instances(&[t, u], &jt.free_inds, lang, probe) {
            Ok(v) if v.is_empty() => return Ok(Verdict::Unknown { reason: "no instance could be built".into() }),
            Ok(v) => v,
            Err(reason) => return Ok(Verdict::Unknown { reason }),
        }
    };
    for inst in &insts {
        let (a, b) = (inst.apply(t), inst.apply(u));
        let na = match normalize(&a, map, cfg) {
            Ok(n) => n.term,
            Err(e) => return Ok(Verdict::Unknown { reason: format!("left side at {inst}: {e}") }),
        };
        let nb = match normalize(&b, map, cfg) {
            Ok(n) => n.term,
            Err(e) => return Ok(Verdict::Unknown { reason: format!("right side at {inst}: {e}") }),
        };
        if !same_normal_form(&na, &nb, map) {
            return Ok(Verdict::Counterexample { instance: inst.to_string(), left: na, right: nb });
        }
    }
    Ok(Verdict::Equivalent { tested: insts.len() })
}

/// For sampled closing instances of `t`: the instance typechecks at the
/// instantiated codomain and normalizes to a term canonical at every level
/// with the same type.
pub fn check_denotation_theorem(
    t: &GroundTerm,
    lang: &GroundingLanguage,
    map: &DenotationMap,
    probe: ProbeConfig,
    cfg: EvalConfig,
) -> Report {
    let mut report = Report::new("denotation-theorem");
    let j = match typecheck(t, lang) {
        Ok(j) => j,
        Err(e) => {
            report.push(Item::new("term", "ill-typed", false).detail(e.to_string()));
            return report;
        }
    };
    let insts = if j.is_closed() {
        vec![Instance { individuals: Vec::new(), grounds: Vec::new() }]
    } else {
        match instances(&[t], &j.free_inds, lang, probe) {
            Ok(v) => v,
            Err(reason) => {
                report.push(Item::new("instances", "no instance", false).detail(reason));
                return report;
            }
        }
    };
    for (n, inst) in insts.iter().enumerate() {
        let id = format!("instance {}", n + 1);
        let closed = inst.apply(t);
        let mut want = j.codomain.clone();
        for (x, k) in &inst.individuals {
            want = want.subst(x, k);
        }
        let item = match typecheck(&closed, lang) {
            Err(e) => Item::new(id, "ill-typed instance", false).detail(e.to_string()),
            Ok(ji) if ji.codomain != want || !ji.is_closed() => {
                Item::new(id, "wrong instance type", false).detail(format!("{ji}, wanted {want}"))
            }
            Ok(_) => match normalize(&closed, map, cfg) {
                Err(e @ EvalError::FuelExhausted { .. }) => {
                    Item::new(id, "fuel exhausted", false).detail(e.to_string())
                }
                Err(e) => Item::new(id, "stuck", false).detail(e.to_string()),
                Ok(nf) => {
                    let typed = typecheck(&nf.term, lang).map(|jn| jn.codomain == want && jn.is_closed());
                    let ok = typed == Ok(true) && canonical_everywhere(&nf.term);
                    Item::new(id, if ok { "canonical" } else { "not canonical" }, ok)
                        .detail(format!("{inst} ↦ {}", nf.term))
                        .steps(nf.steps)
                }
            },
        };
        report.push(item);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_moves_every_coordinate() {
        let d = diagonal(&[3, 3], 4);
        assert_eq!(d, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![0, 2]]);
        assert!(diagonal(&[2, 0], 5).is_empty());
        assert_eq!(diagonal(&[], 5), vec![Vec::<usize>::new()]);
    }
}
