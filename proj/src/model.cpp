#include "flowcast/model.hpp"

#include "flowcast/errors.hpp"

namespace flowcast {

std::vector<Matrix> snapshot_params(Model& model) {
    std::vector<Matrix> out;
    for (const ParamRef& p : model.params()) out.push_back(*p.value);
    return out;
}

void restore_params(Model& model, const std::vector<Matrix>& snapshot) {
    auto refs = model.params();
    if (refs.size() != snapshot.size()) {
        throw ShapeError("restore_params: snapshot holds " + std::to_string(snapshot.size()) +
                         " tensors, model has " + std::to_string(refs.size()));
    }
    for (std::size_t i = 0; i < refs.size(); ++i) {
        if (!refs[i].value->same_shape(snapshot[i])) {
            throw ShapeError("restore_params: tensor " + refs[i].name + " is " +
                             refs[i].value->shape_str() + ", snapshot has " +
                             snapshot[i].shape_str());
        }
        *refs[i].value = snapshot[i];
    }
}

}  // namespace flowcast
