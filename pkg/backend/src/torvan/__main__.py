from torvan.cli.main import main

main()
