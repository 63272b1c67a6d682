use crate::model::{
    ControlActionEdge, CorrespondingSafetyConstraint, GuideWord, IdSet, SafetyModel, UcaStatus,
    UnsafeControlAction,
};

use super::{enumerate_contexts, StpaError};

/// Object phrase for a control action under a guide word: `<label> to
/// <target label>`, qualified with "a valid" when the hazard is the action
/// not being (validly) provided.
pub fn action_phrase(
    model: &SafetyModel,
    action: &ControlActionEdge,
    guide_word: GuideWord,
) -> String {
    let target = model
        .node(&action.target)
        .map_or(action.target.as_str(), |n| n.label.as_str());
    match guide_word {
        GuideWord::NotProvided => format!("a valid {} to {}", action.label, target),
        _ => format!("{} to {}", action.label, target),
    }
}

fn source_label<'m>(model: &'m SafetyModel, action: &'m ControlActionEdge) -> &'m str {
    model
        .node(&action.source)
        .map_or(action.source.as_str(), |n| n.label.as_str())
}

fn with_clause(keyword: &str, phrase: &str) -> String {
    if phrase.is_empty() {
        String::new()
    } else {
        format!(" {keyword} {phrase}")
    }
}

/// One candidate UCA per guide word and context of `vars`, in guide-word
/// order then context order. Ids are `<action>.<guide word>.<n>`, `n`
/// counting contexts from 1.
pub fn generate_uca_candidates<S: AsRef<str>>(
    model: &SafetyModel,
    action: &str,
    vars: &[S],
) -> Result<Vec<UnsafeControlAction>, StpaError> {
    let edge = model
        .action(action)
        .ok_or_else(|| StpaError::UnknownAction(action.to_string()))?;
    let contexts = match model.process_model_of(&edge.source) {
        Some(pm) => enumerate_contexts(pm, vars)?,
        None => match vars.first() {
            Some(v) => return Err(StpaError::UnknownVariable(v.as_ref().to_string())),
            None => vec![Default::default()],
        },
    };
    let source = source_label(model, edge);

    let mut out = Vec::with_capacity(GuideWord::ALL.len() * contexts.len());
    for guide_word in GuideWord::ALL {
        for (n, context) in contexts.iter().enumerate() {
            let description = format!(
                "{source} {} {}{}",
                guide_word.phrase(),
                action_phrase(model, edge, guide_word),
                with_clause("while", &context.phrase())
            );
            out.push(UnsafeControlAction {
                id: format!("{}.{}.{}", edge.id, guide_word, n + 1),
                action: edge.id.clone(),
                guide_word,
                context: context.clone(),
                description,
                hazards: IdSet::new(),
                status: UcaStatus::Candidate,
            });
        }
    }
    Ok(out)
}

/// `UCA-<n>` maps to `SC-<n>`; any other UCA id gets an `SC-` prefix.
pub fn corresponding_constraint_id(uca_id: &str) -> String {
    match uca_id.strip_prefix("UCA-") {
        Some(rest) if !rest.is_empty() => format!("SC-{rest}"),
        _ => format!("SC-{uca_id}"),
    }
}

/// Restates a confirmed UCA as a constraint using the per-guide-word
/// modal template.
pub fn derive_corresponding_constraint(
    uca: &UnsafeControlAction,
    model: &SafetyModel,
) -> Result<CorrespondingSafetyConstraint, StpaError> {
    if uca.status != UcaStatus::Confirmed {
        return Err(StpaError::NotConfirmed(uca.id.clone()));
    }
    let edge = model
        .action(&uca.action)
        .ok_or_else(|| StpaError::UnknownAction(uca.action.clone()))?;
    let source = source_label(model, edge);
    let object = action_phrase(model, edge, uca.guide_word);
    let ctx = uca.context.phrase();
    let text = match uca.guide_word {
        GuideWord::NotProvided => {
            format!(
                "{source} must always provide {object}{}",
                with_clause("while", &ctx)
            )
        }
        GuideWord::ProvidedUnsafe => {
            format!(
                "{source} must not provide {object}{}",
                with_clause("when", &ctx)
            )
        }
        GuideWord::WrongTimingOrOrder => format!(
            "{source} must provide {object} at the required time and in the required order{}",
            with_clause("while", &ctx)
        ),
        GuideWord::StoppedTooSoonOrAppliedTooLong => format!(
            "{source} must continue providing {object} for the required duration{}",
            with_clause("while", &ctx)
        ),
    };
    Ok(CorrespondingSafetyConstraint {
        id: corresponding_constraint_id(&uca.id),
        uca: uca.id.clone(),
        text,
    })
}
