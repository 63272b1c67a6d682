use std::collections::BTreeSet;

use crate::model::{Context, ProcessModel, ProcessVariable};

use super::StpaError;

/// Full cross product of value assignments over `vars`.
///
/// Variables are ordered by name, the first being the most significant;
/// values follow their declared order. No variables yields the single
/// empty context.
pub fn enumerate_contexts<S: AsRef<str>>(
    pm: &ProcessModel,
    vars: &[S],
) -> Result<Vec<Context>, StpaError> {
    let names: BTreeSet<&str> = vars.iter().map(AsRef::as_ref).collect();
    let selected: Vec<&ProcessVariable> = names
        .into_iter()
        .map(|n| {
            pm.variable(n)
                .ok_or_else(|| StpaError::UnknownVariable(n.to_string()))
        })
        .collect::<Result<_, _>>()?;

    let mut contexts = vec![Context::default()];
    for var in selected.iter().rev() {
        contexts = var
            .values
            .iter()
            .flat_map(|value| {
                contexts.iter().map(move |ctx| {
                    let mut ctx = ctx.clone();
                    ctx.assignments.insert(var.name.clone(), value.clone());
                    ctx
                })
            })
            .collect();
    }
    Ok(contexts)
}
