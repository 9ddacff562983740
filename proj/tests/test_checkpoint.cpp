#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "apsel/checkpoint.hpp"
#include "apsel/errors.hpp"
#include "apsel/io.hpp"

using namespace apsel;
namespace fs = std::filesystem;

namespace {

AgentConfig small_config()
{
    AgentConfig c;
    c.actor_hidden = {8, 8};
    c.critic_hidden = {8, 8, 4};
    c.batch_size = 8;
    c.buffer_size = 100;
    return c;
}

fs::path temp_file(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "apsel_test_checkpoint";
    fs::create_directories(dir);
    return dir / name;
}

bool same_net(const Mlp& a, const Mlp& b)
{
    if (!a.same_architecture(b))
        return false;
    for (std::size_t l = 0; l < a.layers().size(); ++l)
        if (a.layers()[l].weights != b.layers()[l].weights || a.layers()[l].bias != b.layers()[l].bias)
            return false;
    return true;
}

}  // namespace

TEST(Checkpoint, RoundTripIsExact)
{
    Scenario s = make_scenario1(2, 2, 20.0);
    Environment env(s, ChannelParams{}, RewardConfig{});
    DdpgAgent agent(2, 2, small_config(), 3);
    train(env, agent, 5, 1);
    const fs::path p = temp_file("roundtrip.json");
    save_checkpoint(agent, {5, 1}, p);
    const LoadedCheckpoint back = load_checkpoint(p, 2, 2);
    EXPECT_TRUE(same_net(back.agent.actor(), agent.actor()));
    EXPECT_TRUE(same_net(back.agent.critic(), agent.critic()));
    EXPECT_TRUE(same_net(back.agent.target_actor(), agent.target_actor()));
    EXPECT_TRUE(same_net(back.agent.target_critic(), agent.target_critic()));
    EXPECT_EQ(back.agent.epsilon(), agent.epsilon());
    EXPECT_EQ(back.agent.explore_calls(), agent.explore_calls());
    EXPECT_EQ(back.agent.critic_optimizer().t_, agent.critic_optimizer().t_);
    EXPECT_EQ(back.agent.critic_optimizer().v_w[1], agent.critic_optimizer().v_w[1]);
    EXPECT_EQ(back.meta.episodes_trained, 5u);
    EXPECT_FALSE(fs::exists(p.string() + ".tmp"));
}

TEST(Checkpoint, UntrainedAgentLoads)
{
    DdpgAgent agent(2, 2, small_config(), 3);
    const fs::path p = temp_file("fresh.json");
    save_checkpoint(agent, {0, 1}, p);
    EXPECT_NO_THROW(load_checkpoint(p, 2, 2));
}

TEST(Checkpoint, DimensionMismatchRejected)
{
    DdpgAgent agent(2, 2, small_config(), 3);
    const fs::path p = temp_file("dims.json");
    save_checkpoint(agent, {0, 1}, p);
    EXPECT_THROW(load_checkpoint(p, 6, 4), DomainError);
}

TEST(Checkpoint, TamperedHashRejected)
{
    DdpgAgent agent(2, 2, small_config(), 3);
    const fs::path p = temp_file("tamper.json");
    save_checkpoint(agent, {0, 1}, p);
    std::string text = read_file(p);
    const auto pos = text.find("\"config_hash\"");
    ASSERT_NE(pos, std::string::npos);
    const auto q = text.find('"', text.find(':', pos) + 1);
    text[q + 1] = text[q + 1] == '0' ? '1' : '0';
    write_file_atomic(p, text);
    EXPECT_THROW(load_checkpoint(p, 2, 2), DomainError);
}

TEST(Checkpoint, MissingOrGarbageFile)
{
    EXPECT_THROW(load_checkpoint(temp_file("does_not_exist.json"), 2, 2), DomainError);
    const fs::path p = temp_file("garbage.json");
    write_file_atomic(p, "{ not json");
    EXPECT_THROW(load_checkpoint(p, 2, 2), DomainError);
}

TEST(ConfigHash, DependsOnShapeOnly)
{
    AgentConfig a = small_config(), b = small_config();
    b.lr_actor = 0.5;
    EXPECT_EQ(config_hash(2, 2, a), config_hash(2, 2, b));
    b.actor_hidden = {8, 9};
    EXPECT_NE(config_hash(2, 2, a), config_hash(2, 2, b));
    EXPECT_NE(config_hash(2, 2, a), config_hash(2, 3, a));
}
