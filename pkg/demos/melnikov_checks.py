# Site-free Melnikov suites on the n = 2 catalog plus one explicit resultant.
from nlsblocks.catalog import BLACK, RED, edge
from nlsblocks.graphs import enumerate_blocks
from nlsblocks.melnikov import (first_melnikov_suite, replay, second_melnikov,
                                second_melnikov_suite, smoke_second)

blocks = enumerate_blocks(2, 4)
first = first_melnikov_suite(blocks, max_l1=6)
second = second_melnikov_suite(blocks, max_l1=4)
print(f"first:  {first['passed']}/{first['queries']}")
print(f"second: {second['passed']}/{second['queries']} ({second['full_checks']} full checks)")
print("smoke hits:", len(smoke_second(blocks, second["nus"], count=20).hits))

cert = second_melnikov(edge(BLACK), edge(RED), (0, 0), 1, n=2, method="Resultant")
print(cert.verdict, cert.evidence["resultant"], "replay:", replay(cert))
