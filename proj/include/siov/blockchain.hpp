#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "siov/errors.hpp"
#include "siov/geo.hpp"
#include "siov/rng.hpp"
#include "siov/time.hpp"

namespace siov {

struct Transaction {
  std::uint64_t tx_id = 0;
  std::uint32_t vehicle = 0;
  double speed_mps = 0;
  Vec2 location;
  SimTimeUs created_at = 0;  // RSU arrival time = generation + L_M
  std::uint64_t gas = 21000;
  std::uint32_t origin_rsu = 0;
};

inline constexpr std::uint64_t kGenesisBlockId = 0;

struct Block {
  std::uint64_t block_id = kGenesisBlockId;
  std::uint64_t parent_id = kGenesisBlockId;  // simulated hash linkage
  std::uint32_t height = 0;
  std::uint32_t miner = std::numeric_limits<std::uint32_t>::max();
  SimTimeUs created_at = 0;
  std::vector<std::uint64_t> tx_ids;
  std::uint64_t gas_used = 0;
};

struct BlockchainParams {
  double block_interval_s = 2.7;       // T_G
  double block_receive_time_s = 0.25;  // T_R
  std::uint64_t gas_limit = 30'000'000;
  std::uint64_t gas_per_tx = 21'000;
  double hash_power_mu = 100;
  double hash_power_sigma = 20;
};

/// One RSU acting as a blockchain node: a local chain from genesis and a view
/// of the pending transaction pool. Miners additionally race for blocks.
struct ChainNode {
  std::uint32_t node_id = 0;
  bool is_miner = false;
  double hash_power = 0;
  double hash_share = 0;  // R_n = H_n / sum(H)

  std::vector<std::uint64_t> chain{kGenesisBlockId};

  // oldest-first pool ordering: (created_at, tx_id)
  struct PoolKey {
    SimTimeUs created_at;
    std::uint64_t tx_id;
    bool operator<(const PoolKey& o) const {
      if (created_at != o.created_at) return created_at < o.created_at;
      return tx_id < o.tx_id;
    }
  };
  std::set<PoolKey> pool;
};

struct ConsensusRound {
  std::size_t winner = 0;  // node index
  double block_time_s = 0; // the winning (minimum) draw
};

struct CanonicalChain {
  std::size_t node = 0;  // whose local chain won
  std::vector<std::uint64_t> block_ids;
  std::uint64_t tx_count = 0;
};

class BlockchainNetwork {
 public:
  BlockchainNetwork(BlockchainParams params, std::size_t n_nodes, std::size_t n_miners)
      : params_(params) {
    blocks_.emplace(kGenesisBlockId, Block{});
    nodes_.resize(n_nodes);
    for (std::size_t i = 0; i < n_nodes; ++i) {
      nodes_[i].node_id = static_cast<std::uint32_t>(i);
      nodes_[i].is_miner = i < n_miners;
    }
  }

  const BlockchainParams& params() const { return params_; }
  std::vector<ChainNode>& nodes() { return nodes_; }
  const std::vector<ChainNode>& nodes() const { return nodes_; }
  const Block& block(std::uint64_t id) const { return blocks_.at(id); }
  const std::unordered_map<std::uint64_t, Block>& blocks() const { return blocks_; }
  const Transaction& transaction(std::uint64_t id) const { return txs_.at(id); }
  std::uint64_t blocks_mined() const { return next_block_id_ - 1; }

  /// Gaussian hash power per miner, truncated positive by redraw; shares
  /// normalized to sum to one.
  void assign_hash_power(SubStream& stream) {
    double total = 0;
    for (auto& n : nodes_) {
      if (!n.is_miner) continue;
      n.hash_power = stream.normal_positive(params_.hash_power_mu, params_.hash_power_sigma);
      total += n.hash_power;
    }
    for (auto& n : nodes_) {
      if (n.is_miner) n.hash_share = n.hash_power / total;
    }
  }

  /// Explicit shares (tests/oracles); must sum to 1 over miners.
  void set_hash_shares(const std::vector<double>& shares) {
    std::size_t k = 0;
    for (auto& n : nodes_) {
      if (!n.is_miner) continue;
      n.hash_share = shares.at(k);
      n.hash_power = shares.at(k);
      ++k;
    }
  }

  /// Exponential block time of one miner: rate R_n / T_G.
  double sample_block_time(const ChainNode& miner, SubStream& stream) const {
    return sample_exponential(miner.hash_share / params_.block_interval_s, stream);
  }

  /// Every miner draws; the minimum wins. Losing draws are discarded — by
  /// memorylessness the restarted race has the same inter-block law.
  ConsensusRound run_consensus_round(SubStream& stream) const {
    ConsensusRound round;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (!nodes_[i].is_miner) continue;
      const double t = sample_block_time(nodes_[i], stream);
      if (t < best) {
        best = t;
        round.winner = i;
      }
    }
    round.block_time_s = best;
    return round;
  }

  /// Winner packages pool transactions oldest-first until the next one would
  /// exceed the gas limit, appends the block to its local chain and removes
  /// the packaged transactions from its own pool view.
  const Block& package_block(std::size_t winner, SimTimeUs now) {
    ChainNode& node = nodes_.at(winner);
    Block b;
    b.block_id = next_block_id_++;
    b.parent_id = node.chain.back();
    b.height = blocks_.at(b.parent_id).height + 1;
    b.miner = node.node_id;
    b.created_at = now;
    auto it = node.pool.begin();
    while (it != node.pool.end()) {
      const Transaction& tx = txs_.at(it->tx_id);
      if (b.gas_used + tx.gas > params_.gas_limit) break;
      b.gas_used += tx.gas;
      b.tx_ids.push_back(tx.tx_id);
      it = node.pool.erase(it);
    }
    auto [bit, ok] = blocks_.emplace(b.block_id, std::move(b));
    node.chain.push_back(bit->first);
    return bit->second;
  }

  /// Independent receive delay per peer node (Exponential, mean T_R), drawn
  /// in node order. Entry i corresponds to the i-th node != miner.
  std::vector<double> broadcast_delays(std::size_t miner, SubStream& stream) const {
    std::vector<double> delays;
    delays.reserve(nodes_.size() - 1);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (i == miner) continue;
      delays.push_back(sample_exponential(1.0 / params_.block_receive_time_s, stream));
    }
    return delays;
  }

  /// Hash-link rule: accept only a block extending the node's current tip;
  /// anything else is discarded outright (no reorg). Accepting removes the
  /// block's transactions from the node's pool view.
  bool validate_and_append(std::size_t node_idx, std::uint64_t block_id) {
    ChainNode& node = nodes_.at(node_idx);
    const Block& b = blocks_.at(block_id);
    if (b.parent_id != node.chain.back()) return false;
    node.chain.push_back(block_id);
    for (std::uint64_t tx : b.tx_ids) {
      node.pool.erase(ChainNode::PoolKey{txs_.at(tx).created_at, tx});
    }
    return true;
  }

  /// Integrity check on demand: a verified message becomes a transaction in
  /// every node's pool view (shared wired backbone, no gossip delay).
  const Transaction& verify_and_enqueue(std::uint32_t vehicle, double speed_mps, Vec2 location,
                                        std::uint32_t origin_rsu, SimTimeUs now,
                                        bool payload_complete = true) {
    if (!payload_complete) {
      throw IncompleteMessageError("message from vehicle " + std::to_string(vehicle) +
                                   " failed the integrity check");
    }
    Transaction tx;
    tx.tx_id = next_tx_id_++;
    tx.vehicle = vehicle;
    tx.speed_mps = speed_mps;
    tx.location = location;
    tx.created_at = now;
    tx.gas = params_.gas_per_tx;
    tx.origin_rsu = origin_rsu;
    const auto [it, ok] = txs_.emplace(tx.tx_id, tx);
    for (auto& n : nodes_) n.pool.insert(ChainNode::PoolKey{now, it->first});
    return it->second;
  }

  /// Longest local chain across nodes; ties broken by earliest tip creation
  /// time, then lowest tip miner id. Returns its de-duplicated transactions.
  CanonicalChain resolve_longest_chain() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
      const auto& a = nodes_[i].chain;
      const auto& b = nodes_[best].chain;
      if (a.size() != b.size()) {
        if (a.size() > b.size()) best = i;
        continue;
      }
      const Block& ta = blocks_.at(a.back());
      const Block& tb = blocks_.at(b.back());
      if (ta.created_at != tb.created_at) {
        if (ta.created_at < tb.created_at) best = i;
        continue;
      }
      if (ta.miner < tb.miner) best = i;
    }
    CanonicalChain canon;
    canon.node = best;
    canon.block_ids = nodes_[best].chain;
    std::unordered_set<std::uint64_t> seen;
    for (std::uint64_t bid : canon.block_ids) {
      for (std::uint64_t tx : blocks_.at(bid).tx_ids) {
        if (seen.insert(tx).second) ++canon.tx_count;
      }
    }
    return canon;
  }

  /// Chain-integrity invariant: every local chain is a path from genesis with
  /// consecutive heights and matching parent links.
  void verify_integrity() const {
    for (const auto& n : nodes_) {
      if (n.chain.empty() || n.chain.front() != kGenesisBlockId) {
        throw SimError("node " + std::to_string(n.node_id) + " chain does not start at genesis");
      }
      for (std::size_t i = 1; i < n.chain.size(); ++i) {
        const Block& b = blocks_.at(n.chain[i]);
        if (b.parent_id != n.chain[i - 1] || b.height != i) {
          throw SimError("node " + std::to_string(n.node_id) + " chain broken at height " +
                         std::to_string(i));
        }
        if (b.gas_used > params_.gas_limit) {
          throw SimError("block " + std::to_string(b.block_id) + " exceeds the gas limit");
        }
      }
    }
  }

 private:
  BlockchainParams params_;
  std::vector<ChainNode> nodes_;
  std::unordered_map<std::uint64_t, Block> blocks_;
  std::unordered_map<std::uint64_t, Transaction> txs_;
  std::uint64_t next_block_id_ = 1;
  std::uint64_t next_tx_id_ = 1;
};

}  // namespace siov
