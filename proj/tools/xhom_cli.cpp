#include <cstdio>

int main(int argc, char** argv) {
    (void)argc;
    (void)argv;
    std::puts("xhom: command-line driver not wired up yet");
    return 1;
}
