#include <iostream>
int main() { std::cout << "wdro cli placeholder\n"; return 0; }
