#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dqlstm {

using ParamId = std::uint32_t;

struct Parameter {
    std::string name;
    std::vector<double> values;
    bool trainable = true;
};

// Owns every real-valued parameter of a model. Ids are dense indices in
// insertion order, so iteration order is deterministic.
class ParameterStore {
  public:
    ParamId add(std::string name, std::vector<double> values, bool trainable);

    const Parameter& get(ParamId id) const;
    Parameter& get(ParamId id);
    std::span<const double> values(ParamId id) const { return get(id).values; }
    bool trainable(ParamId id) const { return get(id).trainable; }

    // Throws ConfigError when the name is unknown.
    ParamId find(const std::string& name) const;

    std::size_t size() const { return params_.size(); }
    std::vector<ParamId> trainable_ids() const;
    std::size_t trainable_count() const;  // number of scalar entries

    const std::vector<Parameter>& all() const { return params_; }

  private:
    std::vector<Parameter> params_;
};

}  // namespace dqlstm
