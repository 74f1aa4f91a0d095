// placeholder main; the CLI is assembled once the campaign layer lands
#include <cstdio>

int main() {
  std::puts("numrad: work in progress");
  return 1;
}
