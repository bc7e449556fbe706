//! Association rules over frequent itemsets, with the three standard
//! metrics: supp(X -> Y) = support(X u Y), conf = support(X u Y)/support(X),
//! lift = conf/support(Y).

use crate::error::{Error, Result};
use crate::fmtnum::sig6;
use crate::miners::FrequentItemsets;
use crate::txdb::{Itemset, TransactionDb};
use std::cmp::Ordering;

/// Anything that can answer exact relative-support queries.
pub trait SupportProvider {
    fn support_of(&self, x: &Itemset) -> Result<f64>;
}

impl SupportProvider for TransactionDb {
    fn support_of(&self, x: &Itemset) -> Result<f64> {
        self.support(x)
    }
}

impl SupportProvider for FrequentItemsets {
    fn support_of(&self, x: &Itemset) -> Result<f64> {
        FrequentItemsets::support_of(self, x)
            .ok_or_else(|| Error::UndefinedRule(format!("itemset {{{x}}} not in mined supports")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssociationRule {
    pub antecedent: Itemset,
    pub consequent: Itemset,
    pub support: f64,
    pub confidence: f64,
    pub lift: f64,
}

#[derive(Debug, Clone)]
pub struct RuleConfig {
    /// Minimum confidence in [0, 1].
    pub minconf: f64,
    /// How many top rules enter the aggregate metric triple.
    pub top_k: usize,
}

impl Default for RuleConfig {
    fn default() -> Self {
        RuleConfig {
            minconf: 0.5,
            top_k: 20,
        }
    }
}

impl RuleConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.minconf) {
            return Err(Error::InvalidConfig(format!(
                "minconf must be in [0, 1], got {}",
                self.minconf
            )));
        }
        if self.top_k == 0 {
            return Err(Error::InvalidConfig("top_k must be >= 1".into()));
        }
        Ok(())
    }
}

/// Computes (support, confidence, lift) for X -> Y from any support source.
/// X and Y must be non-empty and disjoint; zero-support sides make the rule
/// undefined.
pub fn rule_metrics<P: SupportProvider + ?Sized>(
    provider: &P,
    x: &Itemset,
    y: &Itemset,
) -> Result<(f64, f64, f64)> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::InvalidConfig(
            "rule sides must both be non-empty".into(),
        ));
    }
    if !x.is_disjoint(y) {
        return Err(Error::InvalidConfig(
            "rule antecedent and consequent must be disjoint".into(),
        ));
    }
    let sx = provider.support_of(x)?;
    if sx == 0.0 {
        return Err(Error::UndefinedRule(format!("antecedent {{{x}}}")));
    }
    let sy = provider.support_of(y)?;
    if sy == 0.0 {
        return Err(Error::UndefinedRule(format!("consequent {{{y}}}")));
    }
    let sxy = provider.support_of(&x.union(y))?;
    let confidence = sxy / sx;
    let lift = confidence / sy;
    Ok((sxy, confidence, lift))
}

/// Emits X -> Z\X for every frequent Z with |Z| >= 2 and every non-empty
/// proper subset X, keeping rules at or above `minconf`. Output order is
/// total and deterministic: confidence desc, support desc, then antecedent
/// and consequent lexicographically.
pub fn generate_rules(
    fi: &FrequentItemsets,
    db: &TransactionDb,
    cfg: &RuleConfig,
) -> Result<Vec<AssociationRule>> {
    cfg.validate()?;
    debug_assert_eq!(fi.db_len(), db.len(), "itemsets were mined from this db");
    let n = fi.db_len() as f64;

    let mut rules = Vec::new();
    for (z, count_z) in fi.iter() {
        let k = z.len();
        if k < 2 {
            continue;
        }
        let items = z.items();
        // All non-empty proper subsets of z, by bitmask.
        for mask in 1u32..((1u32 << k) - 1) {
            let antecedent = Itemset::from_sorted(
                (0..k)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| items[i])
                    .collect(),
            );
            let consequent = Itemset::from_sorted(
                (0..k)
                    .filter(|i| mask & (1 << i) == 0)
                    .map(|i| items[i])
                    .collect(),
            );
            let count_x = fi.count_of(&antecedent).ok_or_else(|| {
                Error::UndefinedRule(format!("subset {{{antecedent}}} missing from mined set"))
            })?;
            let count_y = fi.count_of(&consequent).ok_or_else(|| {
                Error::UndefinedRule(format!("subset {{{consequent}}} missing from mined set"))
            })?;

            let confidence = count_z as f64 / count_x as f64;
            if confidence < cfg.minconf {
                continue;
            }
            let support = count_z as f64 / n;
            let lift = confidence * n / count_y as f64;
            rules.push(AssociationRule {
                antecedent,
                consequent,
                support,
                confidence,
                lift,
            });
        }
    }

    rules.sort_by(|a, b| {
        b.confidence
            .total_cmp(&a.confidence)
            .then_with(|| b.support.total_cmp(&a.support))
            .then_with(|| a.antecedent.cmp(&b.antecedent))
            .then_with(|| a.consequent.cmp(&b.consequent))
    });
    Ok(rules)
}

/// Arithmetic means of (support, confidence, lift) over the first
/// min(k, |rules|) rules in the deterministic sort order.
pub fn aggregate_topk(rules: &[AssociationRule], k: usize) -> Result<(f64, f64, f64)> {
    if rules.is_empty() {
        return Err(Error::EmptyRuleList);
    }
    let take = k.min(rules.len());
    let mut sums = (0.0, 0.0, 0.0);
    for r in &rules[..take] {
        sums.0 += r.support;
        sums.1 += r.confidence;
        sums.2 += r.lift;
    }
    let d = take as f64;
    Ok((sums.0 / d, sums.1 / d, sums.2 / d))
}

/// CSV with header; itemsets rendered as space-separated ids within quotes.
pub fn rules_to_csv(rules: &[AssociationRule]) -> String {
    let mut out = String::from("antecedent,consequent,support,confidence,lift\n");
    for r in rules {
        out.push_str(&format!(
            "\"{}\",\"{}\",{},{},{}\n",
            r.antecedent,
            r.consequent,
            sig6(r.support),
            sig6(r.confidence),
            sig6(r.lift)
        ));
    }
    out
}

fn cmp_rule_identity(a: &AssociationRule, b: &AssociationRule) -> Ordering {
    a.antecedent
        .cmp(&b.antecedent)
        .then_with(|| a.consequent.cmp(&b.consequent))
}

/// Looks a rule up by (antecedent, consequent) in a rule list.
pub fn find_rule<'a>(
    rules: &'a [AssociationRule],
    antecedent: &Itemset,
    consequent: &Itemset,
) -> Option<&'a AssociationRule> {
    let probe = AssociationRule {
        antecedent: antecedent.clone(),
        consequent: consequent.clone(),
        support: 0.0,
        confidence: 0.0,
        lift: 0.0,
    };
    rules
        .iter()
        .find(|r| cmp_rule_identity(r, &probe) == Ordering::Equal)
}
