#include <cstdio>

int main() {
  std::puts("gsk: CLI under construction");
  return 0;
}
