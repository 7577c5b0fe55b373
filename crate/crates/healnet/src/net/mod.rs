//! Data-plane and control-plane state: nodes, links, flow rules, control
//! mode, switch operating modes and immutable snapshots.

mod path;

pub use path::shortest_path;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Identifier of a node, unique within one topology.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct NodeId(pub String);

/// Identifier of a link, unique within one topology.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LinkId(pub String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl LinkId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for LinkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        Self(s.to_owned())
    }
}

impl From<&str> for LinkId {
    fn from(s: &str) -> Self {
        Self(s.to_owned())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Switch,
    Controller,
    Host,
    Server,
    Client,
    AccessPoint,
    VmHost,
}

impl NodeKind {
    pub fn name(&self) -> &'static str {
        match self {
            NodeKind::Switch => "switch",
            NodeKind::Controller => "controller",
            NodeKind::Host => "host",
            NodeKind::Server => "server",
            NodeKind::Client => "client",
            NodeKind::AccessPoint => "access_point",
            NodeKind::VmHost => "vm_host",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "switch" => NodeKind::Switch,
            "controller" => NodeKind::Controller,
            "host" => NodeKind::Host,
            "server" => NodeKind::Server,
            "client" => NodeKind::Client,
            "access_point" => NodeKind::AccessPoint,
            "vm_host" => NodeKind::VmHost,
            _ => return None,
        })
    }

    /// Kinds that can host a VNF.
    pub fn can_host_vnf(&self) -> bool {
        matches!(self, NodeKind::VmHost | NodeKind::Server)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeStatus {
    Up,
    Crashed,
    Misconfigured,
}

impl NodeStatus {
    pub fn name(&self) -> &'static str {
        match self {
            NodeStatus::Up => "up",
            NodeStatus::Crashed => "crashed",
            NodeStatus::Misconfigured => "misconfigured",
        }
    }
}

/// Behaviour of a switch that loses its controller: keep forwarding with
/// learned state (standalone) or drop new flows until control returns
/// (secure).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SwitchMode {
    Secure,
    Standalone,
}

impl SwitchMode {
    pub fn name(&self) -> &'static str {
        match self {
            SwitchMode::Secure => "secure",
            SwitchMode::Standalone => "standalone",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Node {
    pub id: NodeId,
    pub kind: NodeKind,
    pub status: NodeStatus,
    /// Present iff kind is switch.
    pub switch_mode: Option<SwitchMode>,
    /// Present iff kind is access_point. Dimensionless level, >= 0.
    pub uplink_power: Option<f64>,
    /// CPU capacity, present for vm_host and server nodes.
    pub cpu: Option<f64>,
    /// Memory capacity, present for vm_host and server nodes.
    pub mem: Option<f64>,
}

impl Node {
    pub fn new(id: impl Into<String>, kind: NodeKind) -> Self {
        Self {
            id: NodeId::new(id),
            kind,
            status: NodeStatus::Up,
            switch_mode: matches!(kind, NodeKind::Switch).then_some(SwitchMode::Secure),
            uplink_power: matches!(kind, NodeKind::AccessPoint).then_some(DEFAULT_UPLINK_POWER),
            cpu: kind.can_host_vnf().then_some(DEFAULT_HOST_CAPACITY),
            mem: kind.can_host_vnf().then_some(DEFAULT_HOST_CAPACITY),
        }
    }

    pub fn is_up(&self) -> bool {
        self.status == NodeStatus::Up
    }

    /// Crashed nodes neither forward nor terminate traffic; a misconfigured
    /// node still moves packets, it is merely alarmed.
    pub fn is_operational(&self) -> bool {
        self.status != NodeStatus::Crashed
    }
}

pub const DEFAULT_HOST_CAPACITY: f64 = 16.0;
pub const DEFAULT_UPLINK_POWER: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkKind {
    Data,
    Control,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkStatus {
    Up,
    Down,
}

/// Scalar gauges set by scenario events; there is no queue simulation
/// behind them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinkMetrics {
    pub delay_ms: f64,
    pub jitter_ms: f64,
    pub throughput: f64,
}

impl Default for LinkMetrics {
    fn default() -> Self {
        Self {
            delay_ms: 10.0,
            jitter_ms: 1.0,
            throughput: 100.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Link {
    pub id: LinkId,
    /// Endpoints, stored as an unordered pair.
    pub a: NodeId,
    pub b: NodeId,
    pub kind: LinkKind,
    pub status: LinkStatus,
    pub metrics: LinkMetrics,
}

impl Link {
    pub fn is_up(&self) -> bool {
        self.status == LinkStatus::Up
    }

    pub fn touches(&self, n: &NodeId) -> bool {
        &self.a == n || &self.b == n
    }

    pub fn other(&self, n: &NodeId) -> Option<&NodeId> {
        if &self.a == n {
            Some(&self.b)
        } else if &self.b == n {
            Some(&self.a)
        } else {
            None
        }
    }
}

/// Whether control traffic shares the data links or rides dedicated ones.
/// Fixed for the lifetime of a topology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ControlMode {
    InBand,
    OutOfBand,
}

impl ControlMode {
    pub fn name(&self) -> &'static str {
        match self {
            ControlMode::InBand => "in_band",
            ControlMode::OutOfBand => "out_of_band",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleOrigin {
    Controller,
    SelfHealer,
}

impl RuleOrigin {
    pub fn name(&self) -> &'static str {
        match self {
            RuleOrigin::Controller => "controller",
            RuleOrigin::SelfHealer => "self_healer",
        }
    }
}

/// A forwarding entry held by a switch. `flow` is an opaque key; the
/// simulator uses `<service>:<client>` keys for client-facing rules.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FlowRule {
    pub switch: NodeId,
    pub flow: String,
    pub out_port: NodeId,
    pub installed_by: RuleOrigin,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TopologyError {
    #[error("duplicate id {0}")]
    DuplicateId(String),
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("unknown link {0}")]
    UnknownLink(String),
    #[error("link {0} endpoints must be two distinct declared nodes")]
    BadEndpoints(String),
    #[error("control link {0} declared in in_band topology")]
    ControlLinkInBand(String),
    #[error("control link {0} must join one switch and one controller")]
    ControlLinkShape(String),
    #[error("switch {0} needs exactly one control link in out_of_band mode, found {1}")]
    ControlLinkCount(String, usize),
    #[error("topology needs at least one controller")]
    NoController,
    #[error("controller list entry {0} is not a controller node")]
    NotAController(String),
    #[error("node {0} is not a switch")]
    NotASwitch(String),
    #[error("node {0} is not an access point")]
    NotAnAccessPoint(String),
    #[error("out_port {1} is not a data-link neighbor of switch {0}")]
    NotANeighbor(String, String),
    #[error("node {0} still has links attached")]
    NodeInUse(String),
}

/// Declarative input for [`build_topology`].
#[derive(Debug, Clone, Default)]
pub struct TopologyDecl {
    pub control_mode: Option<ControlMode>,
    pub nodes: Vec<Node>,
    pub links: Vec<(LinkId, NodeId, NodeId, LinkKind)>,
    pub controllers: Vec<NodeId>,
}

/// The full network state: nodes, links, installed rules and the
/// controller roster with its currently active member.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Topology {
    nodes: BTreeMap<NodeId, Node>,
    links: BTreeMap<LinkId, Link>,
    control_mode: ControlMode,
    rules: BTreeSet<FlowRule>,
    controllers: Vec<NodeId>,
    active_controller: NodeId,
    /// Node declaration order, kept for first-fit placement decisions.
    declaration_order: Vec<NodeId>,
    /// Bumped on every mutation; cheap dirty marker for snapshotting.
    revision: u64,
}

/// Validates a declaration and produces a topology with empty rules and
/// every element up.
pub fn build_topology(decl: &TopologyDecl) -> Result<Topology, TopologyError> {
    let control_mode = decl.control_mode.unwrap_or(ControlMode::InBand);

    let mut nodes = BTreeMap::new();
    let mut declaration_order = Vec::new();
    for n in &decl.nodes {
        if nodes.insert(n.id.clone(), n.clone()).is_some() {
            return Err(TopologyError::DuplicateId(n.id.to_string()));
        }
        declaration_order.push(n.id.clone());
    }

    let mut links = BTreeMap::new();
    for (id, a, b, kind) in &decl.links {
        if a == b || !nodes.contains_key(a) || !nodes.contains_key(b) {
            return Err(TopologyError::BadEndpoints(id.to_string()));
        }
        if *kind == LinkKind::Control {
            if control_mode == ControlMode::InBand {
                return Err(TopologyError::ControlLinkInBand(id.to_string()));
            }
            let kinds = (nodes[a].kind, nodes[b].kind);
            let joins_switch_and_controller = matches!(
                kinds,
                (NodeKind::Switch, NodeKind::Controller) | (NodeKind::Controller, NodeKind::Switch)
            );
            if !joins_switch_and_controller {
                return Err(TopologyError::ControlLinkShape(id.to_string()));
            }
        }
        let link = Link {
            id: id.clone(),
            a: a.clone(),
            b: b.clone(),
            kind: *kind,
            status: LinkStatus::Up,
            metrics: LinkMetrics::default(),
        };
        if links.insert(id.clone(), link).is_some() {
            return Err(TopologyError::DuplicateId(id.to_string()));
        }
    }

    if control_mode == ControlMode::OutOfBand {
        for n in nodes.values().filter(|n| n.kind == NodeKind::Switch) {
            let count = links
                .values()
                .filter(|l| l.kind == LinkKind::Control && l.touches(&n.id))
                .count();
            if count != 1 {
                return Err(TopologyError::ControlLinkCount(n.id.to_string(), count));
            }
        }
    }

    if decl.controllers.is_empty() {
        return Err(TopologyError::NoController);
    }
    for c in &decl.controllers {
        match nodes.get(c) {
            None => return Err(TopologyError::UnknownNode(c.to_string())),
            Some(n) if n.kind != NodeKind::Controller => {
                return Err(TopologyError::NotAController(c.to_string()))
            }
            _ => {}
        }
    }

    Ok(Topology {
        nodes,
        links,
        control_mode,
        rules: BTreeSet::new(),
        controllers: decl.controllers.clone(),
        active_controller: decl.controllers[0].clone(),
        declaration_order,
        revision: 0,
    })
}

impl Topology {
    pub fn control_mode(&self) -> ControlMode {
        self.control_mode
    }

    pub fn node(&self, id: &NodeId) -> Option<&Node> {
        self.nodes.get(id)
    }

    pub fn link(&self, id: &LinkId) -> Option<&Link> {
        self.links.get(id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.values()
    }

    pub fn links(&self) -> impl Iterator<Item = &Link> {
        self.links.values()
    }

    pub fn rules(&self) -> impl Iterator<Item = &FlowRule> {
        self.rules.iter()
    }

    pub fn controllers(&self) -> &[NodeId] {
        &self.controllers
    }

    /// The controller currently holding the active role. It may be crashed;
    /// failover moves the role, not the roster.
    pub fn active_controller(&self) -> &NodeId {
        &self.active_controller
    }

    pub fn declaration_order(&self) -> &[NodeId] {
        &self.declaration_order
    }

    pub fn revision(&self) -> u64 {
        self.revision
    }

    pub fn nodes_of_kind(&self, kind: NodeKind) -> impl Iterator<Item = &Node> {
        self.nodes.values().filter(move |n| n.kind == kind)
    }

    /// Neighbors of `n` over up data links, sorted, with the smallest link
    /// id per neighbor.
    pub fn data_neighbors(&self, n: &NodeId) -> Vec<(NodeId, LinkId)> {
        let mut best: BTreeMap<NodeId, LinkId> = BTreeMap::new();
        for l in self.links.values() {
            if l.kind != LinkKind::Data || !l.is_up() {
                continue;
            }
            if let Some(other) = l.other(n) {
                best.entry(other.clone())
                    .and_modify(|cur| {
                        if l.id < *cur {
                            *cur = l.id.clone();
                        }
                    })
                    .or_insert_with(|| l.id.clone());
            }
        }
        best.into_iter().collect()
    }

    pub fn set_link_status(&mut self, id: &LinkId, st: LinkStatus) -> Result<(), TopologyError> {
        let link = self
            .links
            .get_mut(id)
            .ok_or_else(|| TopologyError::UnknownLink(id.to_string()))?;
        link.status = st;
        self.revision += 1;
        Ok(())
    }

    pub fn set_node_status(&mut self, id: &NodeId, st: NodeStatus) -> Result<(), TopologyError> {
        let node = self
            .nodes
            .get_mut(id)
            .ok_or_else(|| TopologyError::UnknownNode(id.to_string()))?;
        node.status = st;
        self.revision += 1;
        Ok(())
    }

    pub fn set_link_metrics(
        &mut self,
        id: &LinkId,
        update: impl FnOnce(&mut LinkMetrics),
    ) -> Result<(), TopologyError> {
        let link = self
            .links
            .get_mut(id)
            .ok_or_else(|| TopologyError::UnknownLink(id.to_string()))?;
        update(&mut link.metrics);
        self.revision += 1;
        Ok(())
    }

    pub fn set_uplink_power(&mut self, id: &NodeId, power: f64) -> Result<(), TopologyError> {
        let node = self
            .nodes
            .get_mut(id)
            .ok_or_else(|| TopologyError::UnknownNode(id.to_string()))?;
        if node.kind != NodeKind::AccessPoint {
            return Err(TopologyError::NotAnAccessPoint(id.to_string()));
        }
        node.uplink_power = Some(power.max(0.0));
        self.revision += 1;
        Ok(())
    }

    pub fn set_switch_mode(&mut self, id: &NodeId, mode: SwitchMode) -> Result<(), TopologyError> {
        let node = self
            .nodes
            .get_mut(id)
            .ok_or_else(|| TopologyError::UnknownNode(id.to_string()))?;
        if node.kind != NodeKind::Switch {
            return Err(TopologyError::NotASwitch(id.to_string()));
        }
        node.switch_mode = Some(mode);
        self.revision += 1;
        Ok(())
    }

    pub fn set_active_controller(&mut self, id: &NodeId) -> Result<(), TopologyError> {
        if !self.controllers.contains(id) {
            return Err(TopologyError::NotAController(id.to_string()));
        }
        self.active_controller = id.clone();
        self.revision += 1;
        Ok(())
    }

    /// Installs a rule. Installing an identical rule twice keeps one copy.
    pub fn install_flow(&mut self, rule: FlowRule) -> Result<(), TopologyError> {
        match self.nodes.get(&rule.switch) {
            None => return Err(TopologyError::UnknownNode(rule.switch.to_string())),
            Some(n) if n.kind != NodeKind::Switch => {
                return Err(TopologyError::NotASwitch(rule.switch.to_string()))
            }
            _ => {}
        }
        let neighbor = self.links.values().any(|l| {
            l.kind == LinkKind::Data
                && l.touches(&rule.switch)
                && l.other(&rule.switch) == Some(&rule.out_port)
        });
        if !neighbor {
            return Err(TopologyError::NotANeighbor(
                rule.switch.to_string(),
                rule.out_port.to_string(),
            ));
        }
        self.rules.insert(rule);
        self.revision += 1;
        Ok(())
    }

    /// Removes every rule on `switch` whose flow key matches.
    pub fn remove_flow(&mut self, switch: &NodeId, flow: &str) -> Result<(), TopologyError> {
        if !self.nodes.contains_key(switch) {
            return Err(TopologyError::UnknownNode(switch.to_string()));
        }
        self.rules.retain(|r| !(&r.switch == switch && r.flow == flow));
        self.revision += 1;
        Ok(())
    }

    pub fn has_rule(&self, switch: &NodeId, flow: &str) -> bool {
        self.rules
            .iter()
            .any(|r| &r.switch == switch && r.flow == flow)
    }

    pub fn rules_on(&self, switch: &NodeId) -> impl Iterator<Item = &FlowRule> {
        self.rules.iter().filter(move |r| &r.switch == switch)
    }

    /// Any rule on `switch` whose flow key starts with `prefix`.
    pub fn has_rule_prefix(&self, switch: &NodeId, prefix: &str) -> bool {
        self.rules
            .iter()
            .any(|r| &r.switch == switch && r.flow.starts_with(prefix))
    }

    /// Adds a node at runtime (client join). Defaults match declaration
    /// defaults: up, secure, nominal power.
    pub fn add_node(&mut self, node: Node) -> Result<(), TopologyError> {
        if self.nodes.contains_key(&node.id) {
            return Err(TopologyError::DuplicateId(node.id.to_string()));
        }
        self.declaration_order.push(node.id.clone());
        self.nodes.insert(node.id.clone(), node);
        self.revision += 1;
        Ok(())
    }

    pub fn add_link(
        &mut self,
        id: LinkId,
        a: NodeId,
        b: NodeId,
        kind: LinkKind,
    ) -> Result<(), TopologyError> {
        if self.links.contains_key(&id) {
            return Err(TopologyError::DuplicateId(id.to_string()));
        }
        if a == b || !self.nodes.contains_key(&a) || !self.nodes.contains_key(&b) {
            return Err(TopologyError::BadEndpoints(id.to_string()));
        }
        if kind == LinkKind::Control && self.control_mode == ControlMode::InBand {
            return Err(TopologyError::ControlLinkInBand(id.to_string()));
        }
        self.links.insert(
            id.clone(),
            Link {
                id,
                a,
                b,
                kind,
                status: LinkStatus::Up,
                metrics: LinkMetrics::default(),
            },
        );
        self.revision += 1;
        Ok(())
    }

    /// Removes a node together with its attached links (client leave).
    pub fn remove_node(&mut self, id: &NodeId) -> Result<(), TopologyError> {
        if !self.nodes.contains_key(id) {
            return Err(TopologyError::UnknownNode(id.to_string()));
        }
        self.links.retain(|_, l| !l.touches(id));
        self.rules.retain(|r| &r.switch != id && &r.out_port != id);
        self.nodes.remove(id);
        self.declaration_order.retain(|n| n != id);
        self.revision += 1;
        Ok(())
    }

    /// The control channel of switch `s`, as the ordered links it rides.
    ///
    /// Out-of-band: the dedicated control link, if up. In-band: the
    /// hop-count shortest path of up data links to the active controller,
    /// ties broken toward the lexicographically smallest node sequence.
    /// The channel is a property of the wiring alone; the health of the
    /// switch itself or of the controller is reported separately.
    pub fn control_path(&self, s: &NodeId) -> Result<Option<Vec<LinkId>>, TopologyError> {
        let node = self
            .nodes
            .get(s)
            .ok_or_else(|| TopologyError::UnknownNode(s.to_string()))?;
        if node.kind != NodeKind::Switch {
            return Err(TopologyError::NotASwitch(s.to_string()));
        }
        match self.control_mode {
            ControlMode::OutOfBand => {
                let link = self
                    .links
                    .values()
                    .find(|l| l.kind == LinkKind::Control && l.touches(s));
                Ok(link.filter(|l| l.is_up()).map(|l| vec![l.id.clone()]))
            }
            ControlMode::InBand => {
                let target = self.active_controller.clone();
                Ok(shortest_path(self, s, &target, &|n: &Node| {
                    matches!(n.kind, NodeKind::Switch | NodeKind::AccessPoint) && n.is_operational()
                }))
            }
        }
    }

    /// The switch a control link serves, for out-of-band links.
    pub fn control_link_switch(&self, l: &Link) -> Option<&NodeId> {
        [&l.a, &l.b]
            .into_iter()
            .find(|n| self.nodes.get(*n).map(|n| n.kind) == Some(NodeKind::Switch))
    }
}

/// Immutable copy of the network plus the VNF placements that were live
/// when it was taken. Versions increase strictly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Snapshot {
    pub version: u64,
    pub topology: Topology,
    /// VNF instance id -> hosting node.
    pub placements: BTreeMap<String, NodeId>,
}

/// Hands out snapshot versions. One per world.
#[derive(Debug, Default)]
pub struct Snapshotter {
    last_version: u64,
}

impl Snapshotter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn take(&mut self, topology: &Topology, placements: BTreeMap<String, NodeId>) -> Snapshot {
        self.last_version += 1;
        Snapshot {
            version: self.last_version,
            topology: topology.clone(),
            placements,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decl_line3(mode: ControlMode) -> TopologyDecl {
        // ctl - s1 - s2 - s3, data links; control links only out of band
        let mut d = TopologyDecl {
            control_mode: Some(mode),
            ..Default::default()
        };
        d.nodes.push(Node::new("ctl", NodeKind::Controller));
        for s in ["s1", "s2", "s3"] {
            d.nodes.push(Node::new(s, NodeKind::Switch));
        }
        d.links.push((
            LinkId::new("l-ctl-s1"),
            NodeId::new("ctl"),
            NodeId::new("s1"),
            LinkKind::Data,
        ));
        d.links.push((
            LinkId::new("l-s1-s2"),
            NodeId::new("s1"),
            NodeId::new("s2"),
            LinkKind::Data,
        ));
        d.links.push((
            LinkId::new("l-s2-s3"),
            NodeId::new("s2"),
            NodeId::new("s3"),
            LinkKind::Data,
        ));
        if mode == ControlMode::OutOfBand {
            for s in ["s1", "s2", "s3"] {
                d.links.push((
                    LinkId::new(format!("c-{s}")),
                    NodeId::new(s),
                    NodeId::new("ctl"),
                    LinkKind::Control,
                ));
            }
        }
        d.controllers.push(NodeId::new("ctl"));
        d
    }

    #[test]
    fn build_out_of_band_counts_links() {
        let t = build_topology(&decl_line3(ControlMode::OutOfBand)).unwrap();
        assert_eq!(t.links().count(), 6);
        assert!(t.rules().next().is_none());
        assert!(t.nodes().all(|n| n.is_up()));
    }

    #[test]
    fn control_link_rejected_in_band() {
        let mut d = decl_line3(ControlMode::InBand);
        d.links.push((
            LinkId::new("c-s1"),
            NodeId::new("s1"),
            NodeId::new("ctl"),
            LinkKind::Control,
        ));
        assert_eq!(
            build_topology(&d),
            Err(TopologyError::ControlLinkInBand("c-s1".into()))
        );
    }

    #[test]
    fn out_of_band_switch_without_control_link_rejected() {
        let mut d = decl_line3(ControlMode::OutOfBand);
        d.links.retain(|(id, ..)| id.as_str() != "c-s2");
        assert_eq!(
            build_topology(&d),
            Err(TopologyError::ControlLinkCount("s2".into(), 0))
        );
    }

    #[test]
    fn duplicate_node_id_rejected() {
        let mut d = decl_line3(ControlMode::InBand);
        d.nodes.push(Node::new("s1", NodeKind::Switch));
        assert_eq!(
            build_topology(&d),
            Err(TopologyError::DuplicateId("s1".into()))
        );
    }

    #[test]
    fn in_band_control_path_walks_data_links() {
        let t = build_topology(&decl_line3(ControlMode::InBand)).unwrap();
        let path = t.control_path(&NodeId::new("s3")).unwrap().unwrap();
        assert_eq!(
            path,
            vec![
                LinkId::new("l-s2-s3"),
                LinkId::new("l-s1-s2"),
                LinkId::new("l-ctl-s1")
            ]
        );
    }

    #[test]
    fn out_of_band_control_path_is_the_dedicated_link() {
        let mut t = build_topology(&decl_line3(ControlMode::OutOfBand)).unwrap();
        assert_eq!(
            t.control_path(&NodeId::new("s1")).unwrap(),
            Some(vec![LinkId::new("c-s1")])
        );
        t.set_link_status(&LinkId::new("c-s1"), LinkStatus::Down)
            .unwrap();
        assert_eq!(t.control_path(&NodeId::new("s1")).unwrap(), None);
    }

    #[test]
    fn control_path_requires_a_switch() {
        let t = build_topology(&decl_line3(ControlMode::InBand)).unwrap();
        assert!(t.control_path(&NodeId::new("ctl")).is_err());
    }

    #[test]
    fn link_status_round_trip_restores_state() {
        let mut t = build_topology(&decl_line3(ControlMode::InBand)).unwrap();
        let before = t.clone();
        t.set_link_status(&LinkId::new("l-s1-s2"), LinkStatus::Down)
            .unwrap();
        assert_ne!(before.link(&LinkId::new("l-s1-s2")), t.link(&LinkId::new("l-s1-s2")));
        t.set_link_status(&LinkId::new("l-s1-s2"), LinkStatus::Up)
            .unwrap();
        assert_eq!(
            before.link(&LinkId::new("l-s1-s2")),
            t.link(&LinkId::new("l-s1-s2"))
        );
    }

    #[test]
    fn unknown_ids_are_errors() {
        let mut t = build_topology(&decl_line3(ControlMode::InBand)).unwrap();
        assert!(t
            .set_link_status(&LinkId::new("nope"), LinkStatus::Down)
            .is_err());
        assert!(t.set_node_status(&NodeId::new("nope"), NodeStatus::Up).is_err());
    }

    #[test]
    fn crashing_the_only_controller_keeps_the_roster() {
        let mut t = build_topology(&decl_line3(ControlMode::InBand)).unwrap();
        t.set_node_status(&NodeId::new("ctl"), NodeStatus::Crashed)
            .unwrap();
        assert_eq!(t.controllers(), &[NodeId::new("ctl")]);
        assert_eq!(
            t.node(&NodeId::new("ctl")).unwrap().status,
            NodeStatus::Crashed
        );
    }

    #[test]
    fn install_then_remove_restores_rule_set() {
        let mut t = build_topology(&decl_line3(ControlMode::InBand)).unwrap();
        let rule = FlowRule {
            switch: NodeId::new("s1"),
            flow: "svc:c".into(),
            out_port: NodeId::new("s2"),
            installed_by: RuleOrigin::Controller,
        };
        t.install_flow(rule.clone()).unwrap();
        t.install_flow(rule.clone()).unwrap();
        assert_eq!(t.rules().count(), 1);
        t.remove_flow(&NodeId::new("s1"), "svc:c").unwrap();
        assert_eq!(t.rules().count(), 0);
    }

    #[test]
    fn install_flow_rejects_non_neighbor_port() {
        let mut t = build_topology(&decl_line3(ControlMode::InBand)).unwrap();
        let err = t
            .install_flow(FlowRule {
                switch: NodeId::new("s1"),
                flow: "svc:c".into(),
                out_port: NodeId::new("s3"),
                installed_by: RuleOrigin::Controller,
            })
            .unwrap_err();
        assert_eq!(err, TopologyError::NotANeighbor("s1".into(), "s3".into()));
    }

    #[test]
    fn snapshot_versions_strictly_increase() {
        let t = build_topology(&decl_line3(ControlMode::InBand)).unwrap();
        let mut snapper = Snapshotter::new();
        let mut last = 0;
        for _ in 0..100 {
            let s = snapper.take(&t, BTreeMap::new());
            assert!(s.version > last);
            last = s.version;
        }
    }

    #[test]
    fn snapshot_is_unaffected_by_later_mutation() {
        let mut t = build_topology(&decl_line3(ControlMode::InBand)).unwrap();
        let mut snapper = Snapshotter::new();
        let snap = snapper.take(&t, BTreeMap::new());
        t.set_link_status(&LinkId::new("l-s1-s2"), LinkStatus::Down)
            .unwrap();
        assert!(snap.topology.link(&LinkId::new("l-s1-s2")).unwrap().is_up());
    }
}
