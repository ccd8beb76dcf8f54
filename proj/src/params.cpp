#include "dqlstm/params.hpp"

#include "dqlstm/errors.hpp"

namespace dqlstm {

ParamId ParameterStore::add(std::string name, std::vector<double> values, bool trainable) {
    params_.push_back(Parameter{std::move(name), std::move(values), trainable});
    return static_cast<ParamId>(params_.size() - 1);
}

const Parameter& ParameterStore::get(ParamId id) const {
    if (id >= params_.size()) {
        throw IndexError("unknown parameter id " + std::to_string(id));
    }
    return params_[id];
}

Parameter& ParameterStore::get(ParamId id) {
    if (id >= params_.size()) {
        throw IndexError("unknown parameter id " + std::to_string(id));
    }
    return params_[id];
}

ParamId ParameterStore::find(const std::string& name) const {
    for (std::size_t i = 0; i < params_.size(); ++i) {
        if (params_[i].name == name) return static_cast<ParamId>(i);
    }
    throw ConfigError("unknown parameter '" + name + "'");
}

std::vector<ParamId> ParameterStore::trainable_ids() const {
    std::vector<ParamId> ids;
    for (std::size_t i = 0; i < params_.size(); ++i) {
        if (params_[i].trainable) ids.push_back(static_cast<ParamId>(i));
    }
    return ids;
}

std::size_t ParameterStore::trainable_count() const {
    std::size_t n = 0;
    for (const auto& p : params_) {
        if (p.trainable) n += p.values.size();
    }
    return n;
}

}  // namespace dqlstm
