from laap_lab.cli import main

main()
