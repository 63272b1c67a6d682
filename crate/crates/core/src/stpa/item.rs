use crate::model::{IdSet, ItemDefinition, SafetyModel};

use super::StpaError;

/// Builds an item from an analyst-selected set of control-structure nodes.
///
/// `boundary_in` holds the edges (actions and feedback) entering the member
/// set, `boundary_out` those leaving it. When no purpose is given, the
/// member labels are joined in id order.
pub fn derive_item_definition(
    model: &SafetyModel,
    id: &str,
    name: &str,
    members: &IdSet,
    purpose: Option<&str>,
) -> Result<ItemDefinition, StpaError> {
    if members.is_empty() {
        return Err(StpaError::EmptyMembers);
    }
    let mut labels = Vec::with_capacity(members.len());
    for m in members {
        let node = model
            .node(m)
            .ok_or_else(|| StpaError::UnknownNode(m.clone()))?;
        labels.push(node.label.as_str());
    }
    if !model.structure.is_weakly_connected(members) {
        return Err(StpaError::Disconnected);
    }

    let mut boundary_in = IdSet::new();
    let mut boundary_out = IdSet::new();
    for (edge, source, target) in model.structure.edges() {
        match (members.contains(source), members.contains(target)) {
            (false, true) => {
                boundary_in.insert(edge.to_string());
            }
            (true, false) => {
                boundary_out.insert(edge.to_string());
            }
            _ => {}
        }
    }

    Ok(ItemDefinition {
        id: id.to_string(),
        name: name.to_string(),
        members: members.clone(),
        boundary_in,
        boundary_out,
        purpose: purpose.map_or_else(|| labels.join(", "), str::to_string),
    })
}

/// Definitions for every item declared in the model, sorted by id. Items
/// that cannot be derived are skipped; `validate_model` reports them.
pub fn item_definitions(model: &SafetyModel) -> Vec<ItemDefinition> {
    let mut items: Vec<ItemDefinition> = model
        .items
        .iter()
        .filter_map(|i| {
            derive_item_definition(model, &i.id, &i.name, &i.members, Some(&i.purpose)).ok()
        })
        .collect();
    items.sort_by(|a, b| a.id.cmp(&b.id));
    items
}
