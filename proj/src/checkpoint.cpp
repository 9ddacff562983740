#include "apsel/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "apsel/errors.hpp"
#include "apsel/io.hpp"

namespace apsel {

using nlohmann::json;

namespace {

constexpr const char* kFormatTag = "apsel-ddpg-checkpoint";

std::uint64_t fnv1a(const std::string& text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

json matrix_to_json(const Eigen::MatrixXd& m)
{
    json values = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            values.push_back(m(i, j));
    return values;
}

Eigen::MatrixXd matrix_from_json(const json& values, Eigen::Index rows, Eigen::Index cols)
{
    if (!values.is_array() || static_cast<Eigen::Index>(values.size()) != rows * cols)
        throw DomainError("checkpoint: parameter array has the wrong length");
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            m(i, j) = values[static_cast<std::size_t>(i * cols + j)].get<double>();
    return m;
}

json net_to_json(const Mlp& net)
{
    json layers = json::array();
    for (const DenseLayer& layer : net.layers())
        layers.push_back({{"in", layer.weights.cols()},
                          {"out", layer.weights.rows()},
                          {"activation", to_string(layer.activation)},
                          {"weights", matrix_to_json(layer.weights)},
                          {"bias", matrix_to_json(layer.bias)}});
    return {{"layer_dims", net.layer_dims()}, {"layers", layers}};
}

void net_from_json(const json& j, Mlp& net)
{
    const json& layers = j.at("layers");
    if (j.at("layer_dims").get<std::vector<std::size_t>>() != net.layer_dims() || layers.size() != net.layers().size())
        throw DomainError("checkpoint: network dimensions do not match the configuration");
    for (std::size_t l = 0; l < layers.size(); ++l) {
        DenseLayer& layer = net.layers()[l];
        if (activation_from_string(layers[l].at("activation").get<std::string>()) != layer.activation)
            throw DomainError("checkpoint: activation mismatch");
        layer.weights = matrix_from_json(layers[l].at("weights"), layer.weights.rows(), layer.weights.cols());
        layer.bias = matrix_from_json(layers[l].at("bias"), layer.bias.size(), 1);
    }
}

json adam_to_json(const Adam& opt)
{
    json layers = json::array();
    for (std::size_t l = 0; l < opt.m_w.size(); ++l)
        layers.push_back({{"m_w", matrix_to_json(opt.m_w[l])},
                          {"v_w", matrix_to_json(opt.v_w[l])},
                          {"m_b", matrix_to_json(opt.m_b[l])},
                          {"v_b", matrix_to_json(opt.v_b[l])}});
    return {{"t", opt.t_}, {"learning_rate", opt.learning_rate()}, {"layers", layers}};
}

void adam_from_json(const json& j, Adam& opt)
{
    const json& layers = j.at("layers");
    if (layers.size() != opt.m_w.size())
        throw DomainError("checkpoint: optimizer layout mismatch");
    opt.t_ = j.at("t").get<long long>();
    for (std::size_t l = 0; l < layers.size(); ++l) {
        opt.m_w[l] = matrix_from_json(layers[l].at("m_w"), opt.m_w[l].rows(), opt.m_w[l].cols());
        opt.v_w[l] = matrix_from_json(layers[l].at("v_w"), opt.v_w[l].rows(), opt.v_w[l].cols());
        opt.m_b[l] = matrix_from_json(layers[l].at("m_b"), opt.m_b[l].size(), 1);
        opt.v_b[l] = matrix_from_json(layers[l].at("v_b"), opt.v_b[l].size(), 1);
    }
}

json config_to_json(std::size_t n_vehicles, std::size_t n_aps, const AgentConfig& c)
{
    json j = {{"n_vehicles", n_vehicles},
              {"n_aps", n_aps},
              {"lr_actor", c.lr_actor},
              {"lr_critic", c.lr_critic},
              {"gamma", c.gamma},
              {"tau", c.tau},
              {"batch_size", c.batch_size},
              {"buffer_size", c.buffer_size},
              {"epsilon_start", c.epsilon_start},
              {"epsilon_decay", c.epsilon_decay},
              {"epsilon_min", c.epsilon_min},
              {"noise_sigma", c.noise_sigma},
              {"actor_hidden", c.actor_hidden},
              {"critic_hidden", c.critic_hidden},
              {"final_layer_init", c.final_layer_init},
              {"reward_scale", c.reward_scale},
              {"actor_logit_l2", c.actor_logit_l2}};
    j["warmup_transitions"] = c.warmup_transitions ? json(*c.warmup_transitions) : json(nullptr);
    return j;
}

AgentConfig config_from_json(const json& j)
{
    AgentConfig c;
    c.lr_actor = j.at("lr_actor").get<double>();
    c.lr_critic = j.at("lr_critic").get<double>();
    c.gamma = j.at("gamma").get<double>();
    c.tau = j.at("tau").get<double>();
    c.batch_size = j.at("batch_size").get<std::size_t>();
    c.buffer_size = j.at("buffer_size").get<std::size_t>();
    c.epsilon_start = j.at("epsilon_start").get<double>();
    c.epsilon_decay = j.at("epsilon_decay").get<double>();
    c.epsilon_min = j.at("epsilon_min").get<double>();
    c.noise_sigma = j.at("noise_sigma").get<double>();
    c.actor_hidden = j.at("actor_hidden").get<std::vector<std::size_t>>();
    c.critic_hidden = j.at("critic_hidden").get<std::vector<std::size_t>>();
    c.final_layer_init = j.at("final_layer_init").get<double>();
    c.reward_scale = j.at("reward_scale").get<double>();
    c.actor_logit_l2 = j.at("actor_logit_l2").get<double>();
    if (!j.at("warmup_transitions").is_null())
        c.warmup_transitions = j.at("warmup_transitions").get<std::size_t>();
    return c;
}

}  // namespace

std::string config_hash(std::size_t n_vehicles, std::size_t n_aps, const AgentConfig& config)
{
    std::ostringstream key;
    key << "v=" << n_vehicles << ";a=" << n_aps << ";actor=";
    for (std::size_t w : config.actor_hidden)
        key << w << ',';
    key << ";critic=";
    for (std::size_t w : config.critic_hidden)
        key << w << ',';
    std::ostringstream hex;
    hex << std::hex << fnv1a(key.str());
    return hex.str();
}

void save_checkpoint(const DdpgAgent& agent, const CheckpointMeta& meta, const std::filesystem::path& path)
{
    json doc = {{"format", kFormatTag},
                {"version", kCheckpointVersion},
                {"config_hash", config_hash(agent.n_vehicles(), agent.n_aps(), agent.config())},
                {"config", config_to_json(agent.n_vehicles(), agent.n_aps(), agent.config())},
                {"episodes_trained", meta.episodes_trained},
                {"seed", meta.seed},
                {"epsilon", agent.epsilon()},
                {"explore_calls", agent.explore_calls()},
                {"networks",
                 {{"actor", net_to_json(agent.actor())},
                  {"critic", net_to_json(agent.critic())},
                  {"target_actor", net_to_json(agent.target_actor())},
                  {"target_critic", net_to_json(agent.target_critic())}}},
                {"optimizers",
                 {{"actor", adam_to_json(agent.actor_optimizer())},
                  {"critic", adam_to_json(agent.critic_optimizer())}}}};
    write_file_atomic(path, doc.dump(1) + "\n");
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path, std::size_t expected_vehicles,
                                 std::size_t expected_aps)
{
    std::ifstream in(path);
    if (!in)
        throw DomainError("checkpoint: cannot open " + path.string());
    json doc;
    try {
        doc = json::parse(in);
        if (doc.at("format").get<std::string>() != kFormatTag)
            throw DomainError("checkpoint: not an apsel checkpoint");
        if (doc.at("version").get<int>() != kCheckpointVersion)
            throw DomainError("checkpoint: unsupported version " + std::to_string(doc.at("version").get<int>()));

        const json& cfg = doc.at("config");
        const auto n_vehicles = cfg.at("n_vehicles").get<std::size_t>();
        const auto n_aps = cfg.at("n_aps").get<std::size_t>();
        AgentConfig config = config_from_json(cfg);
        const auto stored = doc.at("config_hash").get<std::string>();
        if (stored != config_hash(n_vehicles, n_aps, config))
            throw DomainError("checkpoint: config hash does not match the stored config");
        if (stored != config_hash(expected_vehicles, expected_aps, config))
            throw DomainError("checkpoint: trained for " + std::to_string(n_vehicles) + " vehicles / "
                              + std::to_string(n_aps) + " APs, scenario has " + std::to_string(expected_vehicles)
                              + " / " + std::to_string(expected_aps));

        LoadedCheckpoint out{DdpgAgent(n_vehicles, n_aps, config, 0), {}};
        const json& nets = doc.at("networks");
        net_from_json(nets.at("actor"), out.agent.actor());
        net_from_json(nets.at("critic"), out.agent.critic());
        net_from_json(nets.at("target_actor"), out.agent.target_actor());
        net_from_json(nets.at("target_critic"), out.agent.target_critic());
        adam_from_json(doc.at("optimizers").at("actor"), out.agent.actor_optimizer());
        adam_from_json(doc.at("optimizers").at("critic"), out.agent.critic_optimizer());
        out.agent.set_explore_calls(doc.at("explore_calls").get<std::uint64_t>());
        out.meta.episodes_trained = doc.at("episodes_trained").get<std::size_t>();
        out.meta.seed = doc.at("seed").get<std::uint64_t>();
        if (!out.agent.parameters_finite())
            throw DomainError("checkpoint: non-finite parameters");
        return out;
    } catch (const json::exception& e) {
        throw DomainError(std::string("checkpoint: malformed document: ") + e.what());
    }
}

}  // namespace apsel
