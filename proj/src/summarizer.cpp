#include "xmlsumm/summarizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

namespace xmlsumm {

namespace {

// Members of one sibling group arranged by rank; each inner vector is one
// tie class (probabilities within tie_epsilon of each other, chained).
std::vector<std::vector<TagUnit>> tie_classes(const std::vector<TagUnit>& members,
                                              const TagImportance& importance,
                                              double tie_epsilon) {
  std::vector<TagUnit> sorted = members;
  std::stable_sort(sorted.begin(), sorted.end(), [&](const TagUnit& a, const TagUnit& b) {
    return importance.probability_of(a) > importance.probability_of(b);
  });
  std::vector<std::vector<TagUnit>> classes;
  for (const TagUnit& t : sorted) {
    if (!classes.empty()) {
      double prev = importance.probability_of(classes.back().back());
      if (std::abs(prev - importance.probability_of(t)) <= tie_epsilon) {
        classes.back().push_back(t);
        continue;
      }
    }
    classes.emplace_back();
    classes.back().push_back(t);
  }
  return classes;
}

// Bounded draw from the engine; std::uniform_int_distribution is not
// byte-stable across standard libraries.
std::size_t draw_index(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

class Selector {
 public:
  Selector(const Document& doc, const Allocation& allocation, const TagImportance& importance,
           const std::map<TagUnit, TextImportance>& text_importances,
           const std::map<TagUnit, TextUnit>& text_units, std::uint64_t seed, double tie_epsilon,
           std::vector<std::string>* log)
      : doc_(doc),
        importance_(importance),
        text_importances_(text_importances),
        text_units_(text_units),
        rng_(seed),
        tie_epsilon_(tie_epsilon),
        log_(log) {
    for (const auto& [tag, count] : allocation.counts) {
      if (count == 0) continue;
      if (!text_importances_.count(tag)) throw error("missing text importance for " + tag.joined());
      remaining_[tag] = count;
    }
  }

  std::vector<SelectedPair> run(const std::vector<SiblingGroup>& groups) {
    for (const SiblingGroup& group : groups) {
      auto classes = tie_classes(group.members, importance_, tie_epsilon_);
      group_instances_.clear();

      // Top tie class: members enter together, sharing parent instances.
      if (classes.front().size() >= 2) {
        select_tied(classes.front());
      } else {
        select_own_rank(classes.front().front());
      }
      // Lower classes: each member follows a value already selected by a
      // strictly higher-ranked sibling, so snapshot the instances per class.
      for (std::size_t c = 1; c < classes.size(); ++c) {
        std::size_t higher = group_instances_.size();
        for (const TagUnit& member : classes[c]) select_cooccurring(member, higher);
      }
    }
    return std::move(selected_);
  }

 private:
  int count_left(const TagUnit& tag) const {
    auto it = remaining_.find(tag);
    return it == remaining_.end() ? 0 : it->second;
  }

  const TextUnit& unit_of(const TagUnit& tag) const { return text_units_.at(tag); }

  bool is_taken(const TagUnit& tag, int occurrence_index) const {
    auto it = taken_.find(tag);
    return it != taken_.end() && it->second.count(occurrence_index) > 0;
  }

  void select(const TagUnit& tag, int occurrence_index) {
    const TextUnit& unit = unit_of(tag);
    taken_[tag].insert(occurrence_index);
    --remaining_[tag];
    int node_id = unit.occurrences[static_cast<std::size_t>(occurrence_index)].node_id;
    int instance = unit.occurrences[static_cast<std::size_t>(occurrence_index)].parent_instance_id;
    selected_.push_back({tag, node_id});
    group_instances_.push_back(instance);
  }

  // Highest-ranked occurrence not yet taken; -1 when exhausted.
  int next_by_rank(const TagUnit& tag) const {
    for (const auto& [index, p] : text_importances_.at(tag).ranked)
      if (!is_taken(tag, index)) return index;
    return -1;
  }

  // Highest-ranked untaken occurrence under the given parent instance.
  int next_under_instance(const TagUnit& tag, int instance) const {
    const TextUnit& unit = unit_of(tag);
    for (const auto& [index, p] : text_importances_.at(tag).ranked) {
      if (is_taken(tag, index)) continue;
      if (unit.occurrences[static_cast<std::size_t>(index)].parent_instance_id == instance)
        return index;
    }
    return -1;
  }

  void select_own_rank(const TagUnit& tag) {
    while (count_left(tag) > 0) {
      int index = next_by_rank(tag);
      if (index < 0) throw error("allocation exceeds availability for " + tag.joined());
      select(tag, index);
    }
  }

  void select_tied(const std::vector<TagUnit>& members) {
    for (;;) {
      std::vector<const TagUnit*> open;
      for (const TagUnit& m : members)
        if (count_left(m) > 0) open.push_back(&m);
      if (open.empty()) return;

      const TagUnit& lead = *open[draw_index(rng_, open.size())];
      int lead_index = next_by_rank(lead);
      if (lead_index < 0) throw error("allocation exceeds availability for " + lead.joined());
      int instance =
          unit_of(lead).occurrences[static_cast<std::size_t>(lead_index)].parent_instance_id;
      select(lead, lead_index);

      for (const TagUnit* m : open) {
        if (*m == lead || count_left(*m) == 0) continue;
        int index = next_under_instance(*m, instance);
        if (index >= 0) select(*m, index);
        // members without a value under this instance wait for a later draw
      }
    }
  }

  void select_cooccurring(const TagUnit& tag, std::size_t higher_count) {
    // instances selected by higher classes of this group, in selection order
    std::vector<int> candidates;
    for (std::size_t i = 0; i < higher_count; ++i) {
      int instance = group_instances_[i];
      if (std::find(candidates.begin(), candidates.end(), instance) == candidates.end())
        candidates.push_back(instance);
    }

    for (int instance : candidates) {
      if (count_left(tag) == 0) break;
      int index = next_under_instance(tag, instance);
      if (index >= 0) select(tag, index);
    }
    while (count_left(tag) > 0) {
      int index = next_by_rank(tag);
      if (index < 0) throw error("allocation exceeds availability for " + tag.joined());
      if (log_)
        log_->push_back("fallback: " + tag.joined() + " node " +
                        std::to_string(unit_of(tag)
                                           .occurrences[static_cast<std::size_t>(index)]
                                           .node_id) +
                        " has no co-occurring selected sibling; used own rank");
      select(tag, index);
    }
  }

  const Document& doc_;
  const TagImportance& importance_;
  const std::map<TagUnit, TextImportance>& text_importances_;
  const std::map<TagUnit, TextUnit>& text_units_;
  std::mt19937_64 rng_;
  double tie_epsilon_;
  std::vector<std::string>* log_;

  std::map<TagUnit, int> remaining_;
  std::map<TagUnit, std::set<int>> taken_;
  std::vector<SelectedPair> selected_;
  std::vector<int> group_instances_;
};

}  // namespace

std::vector<int> largest_remainder_targets(const std::vector<double>& weights, int budget) {
  std::size_t n = weights.size();
  std::vector<int> targets(n, 0);
  std::vector<double> remainders(n, 0.0);
  int assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double quota = weights[i] * static_cast<double>(budget);
    targets[i] = static_cast<int>(std::floor(quota));
    remainders[i] = quota - std::floor(quota);
    assigned += targets[i];
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (remainders[a] != remainders[b]) return remainders[a] > remainders[b];
    if (weights[a] != weights[b]) return weights[a] > weights[b];
    return a < b;
  });

  int leftover = budget - assigned;
  for (std::size_t pos = 0; leftover > 0; pos = (pos + 1) % n, --leftover)
    ++targets[order[pos]];
  return targets;
}

int Allocation::total() const {
  int sum = 0;
  for (const auto& [tag, count] : counts) sum += count;
  return sum;
}

Allocation allocate_budget(const TagImportance& importance, const std::map<TagUnit, int>& available,
                           int size) {
  if (size < 1) throw config_error("size must be >= 1");

  Allocation allocation;
  allocation.requested_size = size;

  std::map<TagUnit, int> avail_left;
  int total_available = 0;
  for (const TagUnit& tag : importance.order) {
    auto it = available.find(tag);
    if (it == available.end() || it->second < 1)
      throw error("no availability for ranked tag unit " + tag.joined());
    avail_left[tag] = it->second;
    total_available += it->second;
    allocation.counts[tag] = 0;
  }

  std::vector<TagUnit> active = importance.order;
  int budget = std::min(size, total_available);

  while (budget > 0 && !active.empty()) {
    double weight_sum = 0.0;
    for (const TagUnit& tag : active) weight_sum += importance.probability_of(tag);
    std::vector<double> weights;
    weights.reserve(active.size());
    for (const TagUnit& tag : active) weights.push_back(importance.probability_of(tag) / weight_sum);

    std::vector<int> targets = largest_remainder_targets(weights, budget);

    AllocationRound round;
    round.budget = budget;
    std::vector<TagUnit> still_active;
    for (std::size_t i = 0; i < active.size(); ++i) {
      const TagUnit& tag = active[i];
      int added = std::min(targets[i], avail_left[tag]);
      allocation.counts[tag] += added;
      avail_left[tag] -= added;
      budget -= added;
      round.steps.push_back({tag, weights[i], targets[i], added});
      if (avail_left[tag] > 0) still_active.push_back(tag);
    }
    allocation.rounds.push_back(std::move(round));
    active = std::move(still_active);
  }
  return allocation;
}

std::vector<SiblingGroup> group_siblings(const Document& doc, const std::vector<TagUnit>& tags) {
  std::vector<SiblingGroup> groups;
  std::map<std::vector<std::string>, std::size_t> by_parent;  // parent path -> group index
  for (const TagUnit& tag : tags) {
    if (tag.path.empty()) throw error("tag unit with empty path");
    std::vector<std::string> parent(tag.path.begin(), tag.path.end() - 1);
    auto [it, inserted] = by_parent.try_emplace(parent, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].members.push_back(tag);
  }

  // parent element instances under which >= 2 members have a leaf
  for (auto& [parent_path, index] : by_parent) {
    SiblingGroup& group = groups[index];
    if (group.members.size() < 2) continue;
    std::set<std::string> member_labels;
    for (const TagUnit& m : group.members) member_labels.insert(m.path.back());

    for (int id = 0; id < doc.node_count(); ++id) {
      const Node& n = doc.node(id);
      if (n.is_leaf()) continue;
      if (doc.path_of(id) != parent_path) continue;
      std::set<std::string> present;
      for (int child : n.children) {
        const Node& c = doc.node(child);
        if (c.is_leaf() && member_labels.count(c.label)) present.insert(c.label);
      }
      if (present.size() >= 2) group.instances.push_back(id);
    }
  }
  return groups;
}

std::vector<SelectedPair> select_content(const Document& doc, const Allocation& allocation,
                                         const TagImportance& importance,
                                         const std::vector<SiblingGroup>& groups,
                                         const std::map<TagUnit, TextImportance>& text_importances,
                                         const std::map<TagUnit, TextUnit>& text_units,
                                         std::uint64_t seed, double tie_epsilon,
                                         std::vector<std::string>* log) {
  Selector selector(doc, allocation, importance, text_importances, text_units, seed, tie_epsilon,
                    log);
  return selector.run(groups);
}

Summary assemble_summary(const Document& source, const std::vector<SelectedPair>& selected) {
  std::set<int> keep;
  std::set<int> leaves;
  for (const SelectedPair& pair : selected) {
    if (pair.node_id < 0 || pair.node_id >= source.node_count())
      throw error("selected node does not exist: " + std::to_string(pair.node_id));
    leaves.insert(pair.node_id);
    for (int cur = pair.node_id; cur >= 0; cur = source.node(cur).parent)
      if (!keep.insert(cur).second) break;  // ancestors above are already kept
  }
  if (!source.nodes.empty()) keep.insert(0);

  Summary summary;
  summary.doc.source_id = source.source_id;
  summary.span_count = static_cast<int>(leaves.size());

  std::map<int, int> id_map;
  for (int old_id : keep) {
    const Node& old_node = source.node(old_id);
    int new_id = static_cast<int>(summary.doc.nodes.size());
    id_map[old_id] = new_id;
    Node node;
    node.label = old_node.label;
    if (leaves.count(old_id)) node.text = old_node.text;
    node.parent = old_node.parent < 0 ? -1 : id_map.at(old_node.parent);
    summary.doc.nodes.push_back(std::move(node));
    summary.provenance.push_back(old_id);
  }
  for (int new_id = 1; new_id < summary.doc.node_count(); ++new_id) {
    int parent = summary.doc.nodes[static_cast<std::size_t>(new_id)].parent;
    summary.doc.nodes[static_cast<std::size_t>(parent)].children.push_back(new_id);
  }
  return summary;
}

Summary summarize(const Document& doc, const CorpusStats& stats, const SummaryConfig& config) {
  config.validate();

  std::vector<TagUnit> units = extract_tag_units(doc);
  std::map<TagUnit, TextUnit> text_units = extract_text_units(doc);
  TagImportance importance = tag_importance(doc, stats, config.alpha);
  TextRanker ranker(config);

  std::map<TagUnit, TextImportance> text_importances;
  std::map<TagUnit, int> available;
  TagImportance rankable;  // restricted to tags with at least one pair
  rankable.alpha = importance.alpha;
  for (const TagUnit& tag : units) {
    const TextUnit& unit = text_units.at(tag);
    if (unit.empty()) continue;
    text_importances[tag] = ranker.text_importance(unit, doc, stats);
    available[tag] = unit.size();
    rankable.order.push_back(tag);
    rankable.entries[tag] = importance.entries.at(tag);
  }

  std::vector<std::string> log;
  std::vector<SelectedPair> selected;
  if (!rankable.order.empty()) {
    Allocation allocation = allocate_budget(rankable, available, config.size);
    std::vector<SiblingGroup> groups = group_siblings(doc, units);
    selected = select_content(doc, allocation, importance, groups, text_importances, text_units,
                              config.seed, config.tie_epsilon, &log);
  }

  Summary summary = assemble_summary(doc, selected);
  summary.selection_log = std::move(log);
  return summary;
}

}  // namespace xmlsumm
