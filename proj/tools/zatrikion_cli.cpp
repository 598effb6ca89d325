#include <csignal>
#include <iostream>
#include <memory>
#include <string>

#include <pthread.h>

#include "CLI11.hpp"
#include "zatrikion/bridge.hpp"
#include "zatrikion/protocol.hpp"

using namespace zatrikion;

namespace {

int serve_forever(std::uint16_t port, Variant variant) {
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    std::unique_ptr<Bridge> bridge;
    try {
        bridge = std::make_unique<Bridge>(port, variant);
    } catch (const BridgeError& e) {
        std::cerr << "zatrikion: " << e.what() << '\n';
        return 1;
    }
    bridge->start();
    std::cout << "listening ws://127.0.0.1:" << bridge->port() << std::endl;
    int received = 0;
    sigwait(&signals, &received);
    bridge->stop();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zatrikion engine: line protocol on stdio or WebSocket"};
    std::string variant_name = "byzantine-regular";
    std::string protocol = "stdio";
    int port = 8765;
    app.add_option("--variant", variant_name, "byzantine-regular | byzantine-symmetric | circular");
    app.add_option("--protocol", protocol, "stdio or ws")->check(CLI::IsMember({"stdio", "ws"}));
    app.add_option("--port", port, "WebSocket port for --protocol ws")->check(CLI::Range(0, 65535));
    app.set_config("--config", "", "flat key=value file with the same keys");
    CLI11_PARSE(app, argc, argv);

    Variant variant{};
    try {
        variant = parse_variant(variant_name);
    } catch (const std::exception& e) {
        std::cerr << "zatrikion: " << e.what() << '\n';
        return 2;
    }

    if (protocol == "ws") return serve_forever(static_cast<std::uint16_t>(port), variant);

    std::unique_ptr<Bridge> bridge;
    const Session::ServeHook serve = [&](int p) {
        if (bridge) throw BridgeError("already serving on port " + std::to_string(bridge->port()));
        bridge = std::make_unique<Bridge>(static_cast<std::uint16_t>(p), variant);
        bridge->start();
        return "serving ws://127.0.0.1:" + std::to_string(bridge->port());
    };
    return run_stdio(std::cin, std::cout, variant, serve);
}
