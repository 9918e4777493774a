use num_traits::Zero;

use lm_measures::{cylinder_prob, CylinderTable, MeasureSource, Q};

use crate::rule::{unpack_into, Cell, RuleTable};
use crate::EngineError;

/// Default bound on `|A|^{|u|+2rt}`.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// `Pred_t(u)`: the words `v` of length `|u| + 2rt` whose `t`-fold image, read at offset `rt`, is `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredecessorSet {
    pub target: Vec<Cell>,
    pub steps: usize,
    pub offset: usize,
    pub members: Vec<Vec<Cell>>,
}

fn window_len(rule: &RuleTable, n: usize, t: usize) -> usize {
    n + 2 * rule.radius() * t
}

fn check_budget(rule: &RuleTable, len: usize, budget: u64) -> Result<u64, EngineError> {
    let needed = (rule.states() as u64).checked_pow(len as u32);
    match needed {
        Some(n) if n <= budget => Ok(n),
        _ => Err(EngineError::Budget {
            what: format!("{}^{len} windows", rule.states()),
            budget,
        }),
    }
}

/// Calls `f(v, image)` for every window `v` of length `n + 2rt`.
fn for_each_window(rule: &RuleTable, n: usize, t: usize, budget: u64, mut f: impl FnMut(&[Cell], &[Cell])) -> Result<(), EngineError> {
    let len = window_len(rule, n, t);
    let count = check_budget(rule, len, budget)?;
    let mut v = vec![0; len];
    let mut a = Vec::with_capacity(len);
    let mut b = Vec::with_capacity(len);
    for i in 0..count {
        unpack_into(i as usize, rule.states(), &mut v);
        a.clear();
        a.extend_from_slice(&v);
        for _ in 0..t {
            rule.apply_window(&a, &mut b);
            std::mem::swap(&mut a, &mut b);
        }
        f(&v, &a);
    }
    Ok(())
}

pub fn predecessors_with_budget(rule: &RuleTable, u: &[Cell], t: usize, budget: u64) -> Result<PredecessorSet, EngineError> {
    if let Some(c) = u.iter().find(|&&c| c >= rule.states()) {
        return Err(EngineError::Invalid(format!("letter {c} is not a state")));
    }
    let mut members = Vec::new();
    for_each_window(rule, u.len(), t, budget, |v, img| {
        if img == u {
            members.push(v.to_vec());
        }
    })?;
    Ok(PredecessorSet { target: u.to_vec(), steps: t, offset: rule.radius() * t, members })
}

pub fn predecessors(rule: &RuleTable, u: &[Cell], t: usize) -> Result<PredecessorSet, EngineError> {
    predecessors_with_budget(rule, u, t, DEFAULT_BUDGET)
}

fn check_source(rule: &RuleTable, src: &MeasureSource, need: usize) -> Result<(), EngineError> {
    if src.alphabet().size() != rule.states() as usize {
        return Err(EngineError::Invalid(format!(
            "measure has {} letters, rule has {} states",
            src.alphabet().size(),
            rule.states()
        )));
    }
    if let Some(d) = src.max_depth() {
        if need > d {
            return Err(lm_measures::MeasureError::DepthExceeded { requested: need, available: d }.into());
        }
    }
    Ok(())
}

fn as_word(v: &[Cell]) -> Vec<u8> {
    v.iter().map(|&c| c as u8).collect()
}

/// `F^t_* μ([u]) = Σ_{v ∈ Pred_t(u)} μ([v])`, exactly.
pub fn exact_pushforward(rule: &RuleTable, src: &MeasureSource, u: &[Cell], t: usize) -> Result<Q, EngineError> {
    exact_pushforward_with_budget(rule, src, u, t, DEFAULT_BUDGET)
}

pub fn exact_pushforward_with_budget(
    rule: &RuleTable,
    src: &MeasureSource,
    u: &[Cell],
    t: usize,
    budget: u64,
) -> Result<Q, EngineError> {
    check_source(rule, src, window_len(rule, u.len(), t))?;
    let pred = predecessors_with_budget(rule, u, t, budget)?;
    let mut s = Q::zero();
    for v in &pred.members {
        s += cylinder_prob(src, &as_word(v))?;
    }
    Ok(s)
}

/// The whole table of `F^t_* μ` up to `depth`, from a single pass over the windows of length `depth + 2rt`.
/// Shorter cylinders are marginals of the top level.
pub fn pushforward_table(rule: &RuleTable, src: &MeasureSource, depth: usize, t: usize) -> Result<CylinderTable, EngineError> {
    pushforward_table_with_budget(rule, src, depth, t, DEFAULT_BUDGET)
}

pub fn pushforward_table_with_budget(
    rule: &RuleTable,
    src: &MeasureSource,
    depth: usize,
    t: usize,
    budget: u64,
) -> Result<CylinderTable, EngineError> {
    let len = window_len(rule, depth, t);
    check_source(rule, src, len)?;
    let alphabet = src.alphabet().clone();
    let k = alphabet.size();
    let mut top = vec![Q::zero(); alphabet.count(depth)];
    let mut err = None;
    for_each_window(rule, depth, t, budget, |v, img| {
        if err.is_some() {
            return;
        }
        match cylinder_prob(src, &as_word(v)) {
            Ok(p) if p.is_zero() => {}
            Ok(p) => top[alphabet.rank(&as_word(img))] += p,
            Err(e) => err = Some(e),
        }
    })?;
    if let Some(e) = err {
        return Err(e.into());
    }
    // right marginals only; the left ones are checked by validation
    let mut levels = vec![top];
    for n in (0..depth).rev() {
        let upper = levels.last().expect("nonempty");
        let lv = (0..alphabet.count(n)).map(|r| (0..k).map(|a| &upper[r * k + a]).sum()).collect();
        levels.push(lv);
    }
    levels.reverse();
    Ok(CylinderTable::from_levels(&alphabet, levels)?)
}
