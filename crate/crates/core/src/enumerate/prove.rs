//! Propositional provability, used to skip goals no term can inhabit.
//!
//! Sequents are decided in the contraction-free calculus G4ip, which
//! terminates without loop checks.

use std::collections::{BTreeSet, HashMap};

use crate::logic::Formula;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum P {
    Atom(u32),
    Bot,
    And(Box<P>, Box<P>),
    Or(Box<P>, Box<P>),
    Imp(Box<P>, Box<P>),
}

fn imp(a: P, b: P) -> P {
    P::Imp(Box::new(a), Box::new(b))
}

type Sequent = (BTreeSet<P>, P);

#[derive(Default)]
pub(crate) struct Prover {
    atoms: HashMap<Formula, u32>,
    memo: HashMap<Sequent, bool>,
}

impl Prover {
    /// `None` when a formula has a quantifier. Atoms become ids, or `⊥`
    /// where `bot` says so.
    fn convert(&mut self, f: &Formula, bot: &dyn Fn(&Formula) -> bool) -> Option<P> {
        Some(match f {
            Formula::Bot => P::Bot,
            Formula::And(a, b) => P::And(Box::new(self.convert(a, bot)?), Box::new(self.convert(b, bot)?)),
            Formula::Or(a, b) => P::Or(Box::new(self.convert(a, bot)?), Box::new(self.convert(b, bot)?)),
            Formula::Imp(a, b) => imp(self.convert(a, bot)?, self.convert(b, bot)?),
            Formula::Forall(..) | Formula::Exists(..) => return None,
            atom => {
                if bot(atom) {
                    return Some(P::Bot);
                }
                if let Some(&n) = self.atoms.get(atom) {
                    return Some(P::Atom(n));
                }
                let n = self.atoms.len() as u32;
                self.atoms.insert(atom.clone(), n);
                P::Atom(n)
            }
        })
    }

    /// Whether `goal` follows from `hyps` and the `facts` in intuitionistic
    /// propositional logic, reading every atom for which `bot` holds as `⊥`.
    /// `None` when some formula is not propositional.
    pub(crate) fn provable(
        &mut self,
        hyps: &[Formula],
        facts: &[Formula],
        goal: &Formula,
        bot: &dyn Fn(&Formula) -> bool,
    ) -> Option<bool> {
        let mut ctx = BTreeSet::new();
        for h in hyps.iter().chain(facts) {
            ctx.insert(self.convert(h, bot)?);
        }
        let g = self.convert(goal, bot)?;
        Some(self.prove(ctx, g))
    }

    fn prove(&mut self, ctx: BTreeSet<P>, goal: P) -> bool {
        let key = (ctx, goal);
        if let Some(&b) = self.memo.get(&key) {
            return b;
        }
        let (ctx, goal) = key.clone();
        let r = self.search(ctx, goal);
        self.memo.insert(key, r);
        r
    }

    fn search(&mut self, mut ctx: BTreeSet<P>, goal: P) -> bool {
        // Invertible left rules first.
        loop {
            if ctx.contains(&P::Bot) || ctx.contains(&goal) {
                return true;
            }
            let Some(h) = ctx.iter().find(|h| left_invertible(h, &ctx)).cloned() else { break };
            ctx.remove(&h);
            match h {
                P::And(a, b) => {
                    ctx.insert(*a);
                    ctx.insert(*b);
                }
                P::Or(a, b) => {
                    let mut l = ctx.clone();
                    l.insert(*a);
                    ctx.insert(*b);
                    return self.prove(l, goal.clone()) && self.prove(ctx, goal);
                }
                P::Imp(a, c) => match *a {
                    P::Bot => {}
                    P::Atom(_) => {
                        ctx.insert(*c);
                    }
                    P::And(x, y) => {
                        ctx.insert(imp(*x, imp(*y, *c)));
                    }
                    P::Or(x, y) => {
                        ctx.insert(imp(*x, (*c).clone()));
                        ctx.insert(imp(*y, *c));
                    }
                    P::Imp(..) => unreachable!("not invertible"),
                },
                _ => unreachable!("not invertible"),
            }
        }
        match &goal {
            P::And(a, b) => return self.prove(ctx.clone(), (**a).clone()) && self.prove(ctx, (**b).clone()),
            P::Imp(a, b) => {
                let mut c = ctx;
                c.insert((**a).clone());
                return self.prove(c, (**b).clone());
            }
            P::Or(a, b) if self.prove(ctx.clone(), (**a).clone()) || self.prove(ctx.clone(), (**b).clone()) => {
                return true;
            }
            _ => {}
        }
        let nested: Vec<P> =
            ctx.iter().filter(|h| matches!(h, P::Imp(a, _) if matches!(**a, P::Imp(..)))).cloned().collect();
        for h in nested {
            let P::Imp(cd, b) = &h else { unreachable!() };
            let P::Imp(c, d) = &**cd else { unreachable!() };
            let mut rest = ctx.clone();
            rest.remove(&h);
            let mut first = rest.clone();
            first.insert(imp((**d).clone(), (**b).clone()));
            first.insert((**c).clone());
            if self.prove(first, (**d).clone()) {
                rest.insert((**b).clone());
                if self.prove(rest, goal.clone()) {
                    return true;
                }
            }
        }
        false
    }
}

fn left_invertible(h: &P, ctx: &BTreeSet<P>) -> bool {
    match h {
        P::And(..) | P::Or(..) => true,
        P::Imp(a, _) => match &**a {
            P::Bot | P::And(..) | P::Or(..) => true,
            P::Atom(_) => ctx.contains(a),
            P::Imp(..) => false,
        },
        _ => false,
    }
}
