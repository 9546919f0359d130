#include "ledgerlens/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "ledgerlens/rng.hpp"

namespace ledgerlens {

WealthRegime parse_regime(std::string_view s) {
    if (s == "uniform") return WealthRegime::uniform;
    if (s == "preferential") return WealthRegime::preferential;
    if (s == "hub") return WealthRegime::hub;
    if (s == "churn") return WealthRegime::churn;
    if (s == "equal") return WealthRegime::equal;
    throw std::invalid_argument(fmt::format("unknown wealth regime '{}'", s));
}

std::string_view to_string(WealthRegime r) {
    switch (r) {
        case WealthRegime::uniform: return "uniform";
        case WealthRegime::preferential: return "preferential";
        case WealthRegime::hub: return "hub";
        case WealthRegime::churn: return "churn";
        case WealthRegime::equal: return "equal";
    }
    return "?";
}

void SynthConfig::validate() const {
    if (alpha < 0 || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be >= 0");
    if (churn < 0 || churn > 1) throw std::invalid_argument("churn rate must lie in [0, 1]");
    if (reward <= 0) throw std::invalid_argument("reward must be positive");
    if (blocks_per_day == 0) throw std::invalid_argument("blocks_per_day must be >= 1");
    if (max_outputs == 0) throw std::invalid_argument("max_outputs must be >= 1");
    if (max_fee < 0) throw std::invalid_argument("max_fee must be >= 0");
    if (initial_addresses == 0 && days > 0) throw std::invalid_argument("initial_addresses must be >= 1");
    if (regime == WealthRegime::hub && (hubs == 0 || hubs > initial_addresses))
        throw std::invalid_argument("hub count must lie in [1, initial_addresses]");
}

namespace {

// Prefix sums over a growable weight array; sample() inverts the cumulative distribution.
class Fenwick {
public:
    void push(double w) {
        std::size_t i = weights_.size();
        weights_.push_back(0);
        tree_.push_back(0);
        // a new node covers (i - lowbit(i+1), i]; seed it from existing prefix sums
        std::size_t one = i + 1;
        double covered = prefix(i) - prefix(one - (one & (~one + 1)));
        tree_[i] = covered;
        set(i, w);
    }
    void set(std::size_t i, double w) {
        double delta = w - weights_[i];
        weights_[i] = w;
        for (std::size_t k = i + 1; k <= tree_.size(); k += k & (~k + 1)) tree_[k - 1] += delta;
    }
    double total() const { return prefix(tree_.size()); }
    std::size_t sample(double u) const {
        double target = u * total();
        std::size_t pos = 0;
        std::size_t step = 1;
        while (step * 2 <= tree_.size()) step *= 2;
        for (; step; step /= 2)
            if (pos + step <= tree_.size() && tree_[pos + step - 1] <= target) {
                pos += step;
                target -= tree_[pos - 1];
            }
        return std::min(pos, tree_.size() - 1);
    }
    std::size_t size() const { return weights_.size(); }

private:
    double prefix(std::size_t n) const {
        double s = 0;
        for (std::size_t k = n; k > 0; k -= k & (~k + 1)) s += tree_[k - 1];
        return s;
    }
    std::vector<double> weights_;
    std::vector<double> tree_;
};

class Generator {
public:
    explicit Generator(const SynthConfig& c) : cfg_(c), rng_(c.seed) {}

    Ledger run() {
        const std::int64_t midnight = (cfg_.genesis_time / kSecondsPerDay) * kSecondsPerDay;
        for (std::size_t d = 0; d < cfg_.days; ++d) {
            day_start_ = d == 0 ? cfg_.genesis_time : midnight + static_cast<std::int64_t>(d) * kSecondsPerDay;
            day_last_ = midnight + static_cast<std::int64_t>(d + 1) * kSecondsPerDay - 1;
            slot_ = 0;
            grow(d == 0 ? cfg_.initial_addresses : (cfg_.regime == WealthRegime::equal ? 0 : cfg_.address_growth));
            mint(d);
            if (cfg_.regime != WealthRegime::equal)
                for (std::size_t t = 0; t < cfg_.txs_per_day; ++t) transfer();
        }
        return Ledger(std::move(addrs_), std::move(txs_));
    }

private:
    AddrId new_address() {
        auto id = addrs_.intern(fmt::format("a{:08d}", pool_.size()));
        pool_.push_back(id);
        if (id >= balance_.size()) {
            balance_.resize(id + 1, 0);
            funded_pos_.resize(id + 1, kNone);
        }
        weights_.push(weight(0));
        pool_index_.resize(id + 1, 0);
        pool_index_[id] = pool_.size() - 1;
        return id;
    }

    void grow(std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) new_address();
    }

    double weight(Amount balance) const {
        if (cfg_.regime != WealthRegime::preferential) return 1.0;
        return std::pow(1.0 + static_cast<double>(balance) / static_cast<double>(cfg_.reward), cfg_.alpha);
    }

    void credit(AddrId a, Amount v) { set_balance(a, balance_[a] + v); }
    void debit(AddrId a, Amount v) { set_balance(a, balance_[a] - v); }

    void set_balance(AddrId a, Amount v) {
        balance_[a] = v;
        if (v > 0 && funded_pos_[a] == kNone) {
            funded_pos_[a] = funded_.size();
            funded_.push_back(a);
        } else if (v == 0 && funded_pos_[a] != kNone) {
            auto pos = funded_pos_[a];
            funded_[pos] = funded_.back();
            funded_pos_[funded_[pos]] = pos;
            funded_.pop_back();
            funded_pos_[a] = kNone;
        }
        if (cfg_.regime == WealthRegime::preferential) weights_.set(pool_index_[a], weight(v));
    }

    AddrId pick_receiver() {
        switch (cfg_.regime) {
            case WealthRegime::preferential: return pool_[weights_.sample(rng_.uniform())];
            case WealthRegime::hub:
                if (rng_.uniform() < 0.8) return pool_[rng_.below(cfg_.hubs)];
                return pool_[rng_.below(pool_.size())];
            default: return pool_[rng_.below(pool_.size())];
        }
    }

    Transaction make_tx() {
        Transaction tx;
        tx.txid = fmt::format("{:016x}", txs_.size());
        tx.time = std::min(day_start_ + static_cast<std::int64_t>(slot_++), day_last_);
        return tx;
    }

    Amount reward_on(std::size_t day) const {
        Amount r = cfg_.reward;
        if (cfg_.halving_days)
            for (std::size_t h = day / cfg_.halving_days; h > 0 && r > 1; --h) r /= 2;
        return r;
    }

    void mint(std::size_t day) {
        const Amount r = reward_on(day);
        if (cfg_.regime == WealthRegime::equal) {
            auto tx = make_tx();
            for (AddrId a : pool_) {
                tx.outputs.push_back({a, r});
                credit(a, r);
            }
            txs_.push_back(std::move(tx));
            return;
        }
        for (std::size_t b = 0; b < cfg_.blocks_per_day; ++b) {
            auto tx = make_tx();
            AddrId miner = pick_receiver();
            tx.outputs.push_back({miner, r});
            credit(miner, r);
            txs_.push_back(std::move(tx));
        }
    }

    void transfer() {
        if (funded_.empty()) return;
        AddrId sender = funded_[rng_.below(funded_.size())];
        std::vector<AddrId> senders{sender};
        if (funded_.size() > 1 && rng_.uniform() < 0.2) {
            AddrId second = funded_[rng_.below(funded_.size())];
            if (second != sender) senders.push_back(second);
        }
        Amount in_total = 0;
        for (AddrId s : senders) in_total += balance_[s];
        const Amount fee = std::min<Amount>(cfg_.max_fee, in_total / 100) > 0
                               ? static_cast<Amount>(rng_.below(static_cast<std::uint64_t>(
                                     std::min<Amount>(cfg_.max_fee, in_total / 100) + 1)))
                               : 0;
        const auto n_out = 1 + rng_.below(cfg_.max_outputs);
        if (in_total - fee < static_cast<Amount>(n_out) + 1) return;

        auto tx = make_tx();
        for (AddrId s : senders) tx.inputs.push_back({s, balance_[s]});
        for (AddrId s : senders) debit(s, balance_[s]);
        Amount spendable = in_total - fee;

        if (cfg_.regime == WealthRegime::churn && rng_.uniform() < cfg_.churn) {
            AddrId fresh = new_address();
            tx.outputs.push_back({fresh, spendable});
            credit(fresh, spendable);
            txs_.push_back(std::move(tx));
            return;
        }

        // pay a fraction to fresh receivers, return the rest to the first sender as change
        auto pay = static_cast<Amount>(static_cast<double>(spendable) * (0.1 + 0.8 * rng_.uniform()));
        pay = std::clamp<Amount>(pay, static_cast<Amount>(n_out), spendable);
        std::vector<TxIo> outs;
        Amount left = pay;
        for (std::uint64_t k = 0; k < n_out; ++k) {
            AddrId r = pick_receiver();
            Amount share = k + 1 == n_out ? left : std::max<Amount>(1, static_cast<Amount>(static_cast<double>(left) * rng_.uniform() / 2.0));
            share = std::min(share, left - static_cast<Amount>(n_out - k - 1));
            left -= share;
            outs.push_back({r, share});
        }
        if (spendable - pay > 0) outs.push_back({senders.front(), spendable - pay});
        merge_duplicates(outs);
        for (const auto& o : outs) credit(o.addr, o.value);
        tx.outputs = std::move(outs);
        txs_.push_back(std::move(tx));
    }

    static constexpr std::size_t kNone = SIZE_MAX;
    const SynthConfig& cfg_;
    CounterRng rng_;
    AddressTable addrs_;
    std::vector<Transaction> txs_;
    std::vector<AddrId> pool_;
    std::vector<std::size_t> pool_index_;
    std::vector<Amount> balance_;
    std::vector<AddrId> funded_;
    std::vector<std::size_t> funded_pos_;
    Fenwick weights_;
    std::int64_t day_start_ = 0;
    std::int64_t day_last_ = 0;
    std::size_t slot_ = 0;
};

}  // namespace

Ledger generate(const SynthConfig& config) {
    config.validate();
    return Generator(config).run();
}

}  // namespace ledgerlens
