#include "flowcast/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "flowcast/errors.hpp"

namespace flowcast {

namespace {

const char* kMagic = "flowcast-model 1";

std::string full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_tree(std::ostream& out, const RegressionTree& tree) {
    out << "tree " << tree.nodes.size() << "\n";
    for (const TreeNode& n : tree.nodes) {
        if (n.leaf) {
            out << "leaf " << full(n.value) << "\n";
        } else {
            out << "split " << n.feature << " " << full(n.threshold) << " " << n.left << " "
                << n.right << "\n";
        }
    }
}

RegressionTree read_tree(std::istream& in) {
    std::string tag;
    std::size_t count = 0;
    if (!(in >> tag >> count) || tag != "tree") throw DataError("model file: expected a tree");
    RegressionTree tree;
    tree.nodes.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (!(in >> tag)) throw DataError("model file: truncated tree");
        TreeNode& n = tree.nodes[i];
        if (tag == "leaf") {
            n.leaf = true;
            if (!(in >> n.value)) throw DataError("model file: bad leaf");
        } else if (tag == "split") {
            n.leaf = false;
            if (!(in >> n.feature >> n.threshold >> n.left >> n.right)) {
                throw DataError("model file: bad split node");
            }
            if (n.left >= count || n.right >= count) {
                throw DataError("model file: tree child index out of range");
            }
        } else {
            throw DataError("model file: unknown tree node '" + tag + "'");
        }
    }
    return tree;
}

void write_tensors(std::ostream& out, Model& model) {
    std::vector<ParamRef> params = model.params();
    out << "tensors " << params.size() << "\n";
    for (const ParamRef& p : params) {
        const Matrix& m = *p.value;
        out << "tensor " << p.name << " " << m.rows() << " " << m.cols() << "\n";
        for (std::size_t r = 0; r < m.rows(); ++r) {
            for (std::size_t c = 0; c < m.cols(); ++c) {
                if (c) out << " ";
                out << full(m(r, c));
            }
            out << "\n";
        }
    }
}

void read_tensors(std::istream& in, Model& model) {
    std::string tag;
    std::size_t count = 0;
    if (!(in >> tag >> count) || tag != "tensors") {
        throw DataError("model file: expected tensor block");
    }
    std::map<std::string, Matrix*> by_name;
    for (const ParamRef& p : model.params()) by_name[p.name] = p.value;
    if (count != by_name.size()) {
        throw DataError("model file: " + std::to_string(count) + " tensors, model has " +
                        std::to_string(by_name.size()));
    }
    for (std::size_t i = 0; i < count; ++i) {
        std::string name;
        std::size_t rows = 0;
        std::size_t cols = 0;
        if (!(in >> tag >> name >> rows >> cols) || tag != "tensor") {
            throw DataError("model file: bad tensor header");
        }
        const auto it = by_name.find(name);
        if (it == by_name.end()) throw DataError("model file: unknown tensor '" + name + "'");
        Matrix& m = *it->second;
        if (m.rows() != rows || m.cols() != cols) {
            throw ShapeError("model file: tensor '" + name + "' is " + std::to_string(rows) +
                             "x" + std::to_string(cols) + ", model expects " + m.shape_str());
        }
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) {
                if (!(in >> m(r, c))) {
                    throw DataError("model file: truncated tensor '" + name + "'");
                }
            }
        }
    }
}

}  // namespace

double TrainedModel::predict_normalized(const Matrix& window) const {
    switch (kind) {
        case ModelKind::lr: return linear.predict(flatten_window(window));
        case ModelKind::gbr:
        case ModelKind::rf: return ensemble.predict(flatten_window(window));
        case ModelKind::cnn: return cnn->predict(window);
        case ModelKind::lstm: return lstm->predict(window);
    }
    throw ArgumentError("unknown model kind");
}

void save_model(const std::string& path, const TrainedModel& model) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write model file '" + path + "'");
    out << kMagic << "\n";
    out << "kind " << kind_name(model.kind) << "\n";
    out << "lookback " << model.lookback << "\n";
    out << "features " << model.features << "\n";
    out << "norm";
    for (std::size_t j = 0; j < model.stats.feature_mean.size(); ++j) {
        out << " " << full(model.stats.feature_mean[j]) << " "
            << full(model.stats.feature_std[j]);
    }
    out << " " << full(model.stats.target_mean) << " " << full(model.stats.target_std) << "\n";

    switch (model.kind) {
        case ModelKind::lr: {
            out << "weights " << model.linear.weights.size() << "\n";
            for (std::size_t j = 0; j < model.linear.weights.size(); ++j) {
                if (j) out << " ";
                out << full(model.linear.weights[j]);
            }
            out << "\n";
            out << "intercept " << full(model.linear.intercept) << "\n";
            out << "ridge " << (model.linear.ridge_fallback ? 1 : 0) << "\n";
            break;
        }
        case ModelKind::gbr: {
            out << "gbr " << model.ensemble.trees.size() << " "
                << full(model.ensemble.learning_rate) << " "
                << full(model.ensemble.initial_prediction) << "\n";
            for (const RegressionTree& t : model.ensemble.trees) write_tree(out, t);
            break;
        }
        case ModelKind::rf: {
            out << "rf " << model.ensemble.trees.size() << "\n";
            for (const RegressionTree& t : model.ensemble.trees) write_tree(out, t);
            break;
        }
        case ModelKind::cnn: {
            const CnnConfig& cfg = model.cnn->config();
            out << "cnn " << cfg.kernel_heights.size();
            for (std::size_t h : cfg.kernel_heights) out << " " << h;
            out << " " << cfg.channels_per_height << " " << cfg.conv_stride << "\n";
            write_tensors(out, *model.cnn);
            break;
        }
        case ModelKind::lstm: {
            const LstmConfig& cfg = model.lstm->config();
            out << "lstm " << cfg.hidden_per_direction << " " << (cfg.bidirectional ? 1 : 0)
                << " " << cfg.extra_layers.size();
            for (std::size_t h : cfg.extra_layers) out << " " << h;
            out << "\n";
            write_tensors(out, *model.lstm);
            break;
        }
    }
    if (!out) throw DataError("write failed for model file '" + path + "'");
}

TrainedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != kMagic) {
        throw DataError("'" + path + "' is not a model file (bad magic line)");
    }

    TrainedModel model;
    std::string tag;
    std::string kind_text;
    if (!(in >> tag >> kind_text) || tag != "kind") throw DataError("model file: missing kind");
    model.kind = parse_kind(kind_text);
    if (!(in >> tag >> model.lookback) || tag != "lookback") {
        throw DataError("model file: missing lookback");
    }
    if (!(in >> tag >> model.features) || tag != "features") {
        throw DataError("model file: missing features");
    }
    if (!(in >> tag) || tag != "norm") throw DataError("model file: missing norm stats");
    model.stats.feature_mean.resize(model.features);
    model.stats.feature_std.resize(model.features);
    for (std::size_t j = 0; j < model.features; ++j) {
        if (!(in >> model.stats.feature_mean[j] >> model.stats.feature_std[j])) {
            throw DataError("model file: truncated norm stats");
        }
    }
    if (!(in >> model.stats.target_mean >> model.stats.target_std)) {
        throw DataError("model file: truncated norm stats");
    }

    if (!(in >> tag)) throw DataError("model file: missing payload");
    switch (model.kind) {
        case ModelKind::lr: {
            if (tag != "weights") throw DataError("model file: expected weights");
            std::size_t p = 0;
            if (!(in >> p)) throw DataError("model file: bad weight count");
            model.linear.weights.resize(p);
            for (std::size_t j = 0; j < p; ++j) {
                if (!(in >> model.linear.weights[j])) {
                    throw DataError("model file: truncated weights");
                }
            }
            int ridge = 0;
            if (!(in >> tag >> model.linear.intercept) || tag != "intercept") {
                throw DataError("model file: missing intercept");
            }
            if (!(in >> tag >> ridge) || tag != "ridge") {
                throw DataError("model file: missing ridge flag");
            }
            model.linear.ridge_fallback = ridge != 0;
            break;
        }
        case ModelKind::gbr: {
            if (tag != "gbr") throw DataError("model file: expected gbr payload");
            std::size_t n_trees = 0;
            if (!(in >> n_trees >> model.ensemble.learning_rate >>
                  model.ensemble.initial_prediction)) {
                throw DataError("model file: bad gbr header");
            }
            model.ensemble.kind = EnsembleKind::gbr;
            for (std::size_t t = 0; t < n_trees; ++t) {
                model.ensemble.trees.push_back(read_tree(in));
            }
            break;
        }
        case ModelKind::rf: {
            if (tag != "rf") throw DataError("model file: expected rf payload");
            std::size_t n_trees = 0;
            if (!(in >> n_trees)) throw DataError("model file: bad rf header");
            model.ensemble.kind = EnsembleKind::rf;
            for (std::size_t t = 0; t < n_trees; ++t) {
                model.ensemble.trees.push_back(read_tree(in));
            }
            break;
        }
        case ModelKind::cnn: {
            if (tag != "cnn") throw DataError("model file: expected cnn payload");
            std::size_t n_heights = 0;
            if (!(in >> n_heights)) throw DataError("model file: bad cnn header");
            CnnConfig cfg;
            cfg.kernel_heights.resize(n_heights);
            for (std::size_t i = 0; i < n_heights; ++i) {
                if (!(in >> cfg.kernel_heights[i])) throw DataError("model file: bad cnn header");
            }
            if (!(in >> cfg.channels_per_height >> cfg.conv_stride)) {
                throw DataError("model file: bad cnn header");
            }
            SeededRng dummy(0);
            model.cnn = std::make_shared<CnnModel>(model.features, cfg, dummy);
            read_tensors(in, *model.cnn);
            break;
        }
        case ModelKind::lstm: {
            if (tag != "lstm") throw DataError("model file: expected lstm payload");
            LstmConfig cfg;
            int bidir = 0;
            std::size_t extra = 0;
            if (!(in >> cfg.hidden_per_direction >> bidir >> extra)) {
                throw DataError("model file: bad lstm header");
            }
            cfg.bidirectional = bidir != 0;
            cfg.extra_layers.resize(extra);
            for (std::size_t i = 0; i < extra; ++i) {
                if (!(in >> cfg.extra_layers[i])) throw DataError("model file: bad lstm header");
            }
            SeededRng dummy(0);
            model.lstm = std::make_shared<LstmNetwork>(model.features, cfg, dummy);
            read_tensors(in, *model.lstm);
            break;
        }
    }
    return model;
}

}  // namespace flowcast
