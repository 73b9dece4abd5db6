#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "csb/model.hpp"
#include "csb/rng.hpp"

namespace csb {

// What a policy is allowed to know about the instance. mu and theta stay
// hidden; hyperparameters arrive through each policy's config.
struct InstancePublic {
    int K = 0;
    double Q = 0.0;
    Mode mode = Mode::Loss;
};

inline InstancePublic public_view(const CsbInstance& inst) {
    return {inst.K, inst.Q, inst.mode};
}

// Censored semi-bandit feedback for one round. y[i] is the observed sample
// (0 where censored); observed[i] marks arms whose sample was uncensored.
struct FeedbackVector {
    std::vector<std::uint8_t> y;
    std::vector<std::uint8_t> observed;
};

// Search bookkeeping event, kept for audits of the update rules.
struct SearchEvent {
    long long round = 0;
    char kind = '?'; // 'L' loss/reward move, 'W' wait-budget move, 'K' lock
    int arm = -1;    // -1 for scalar (same-threshold) searches
    int l = 0, u = 0, j = 0; // search bounds after the move (grid or set indices)
};

class Policy {
public:
    virtual ~Policy() = default;
    virtual Allocation select(long long round) = 0;
    virtual void update(const FeedbackVector& fb) = 0;
    virtual std::string name() const = 0;
    // True once the threshold search (if any) has finished.
    virtual bool locked() const { return true; }
    virtual const std::vector<SearchEvent>& events() const { return no_events_; }

private:
    std::vector<SearchEvent> no_events_;
};

using PolicyFactory = std::function<std::unique_ptr<Policy>(const InstancePublic&, RngStream)>;

} // namespace csb
